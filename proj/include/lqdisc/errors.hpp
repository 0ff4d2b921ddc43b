/*
 Copyright 2026 The lqdisc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <stdexcept>
#include <string>

namespace lqdisc {

enum class ErrorKind {
  kArgument,
  kValidation,
  kDivergence,
  kSingular,
  kConvexity,
  kResource,
};

/**
 * @brief Base error for the library.
 *
 * The kind determines the CLI exit code; the message is a single line.
 */
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed dimensions, asymmetric weights and similar model defects.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::kValidation, what) {}
};

/// A propagated quantity became non-finite.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, long step)
      : Error(ErrorKind::kDivergence, what), step_(step) {}

  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// LU factorization hit a (numerically) zero pivot.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, long pivot)
      : Error(ErrorKind::kSingular, what), pivot_(pivot) {}

  long pivot() const noexcept { return pivot_; }

 private:
  long pivot_;
};

/// Input block of the stage weight is not positive definite.
class ConvexityError : public Error {
 public:
  explicit ConvexityError(const std::string& what)
      : Error(ErrorKind::kConvexity, what) {}
};

/// A requested problem exceeds a configured size cap.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, long requested)
      : Error(ErrorKind::kResource, what), requested_(requested) {}

  long requested() const noexcept { return requested_; }

 private:
  long requested_;
};

}  // namespace lqdisc
