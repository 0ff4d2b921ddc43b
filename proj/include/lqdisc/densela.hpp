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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "lqdisc/errors.hpp"
#include "lqdisc/types.hpp"

namespace lqdisc {

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

template <typename Derived>
typename Derived::Scalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  return m.size() == 0 ? Scalar(0) : m.cwiseAbs().maxCoeff();
}

/// Induced 1-norm (maximum absolute column sum).
template <typename Derived>
typename Derived::Scalar norm1(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  return m.size() == 0 ? Scalar(0) : m.cwiseAbs().colwise().sum().maxCoeff();
}

template <typename Derived>
MatrixX<typename Derived::Scalar> symmetrize(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) {
    throw ValidationError("symmetrize: matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected square");
  }
  return (m + m.transpose()) / typename Derived::Scalar(2);
}

/**
 * True iff the smallest eigenvalue of the symmetric part is at least
 * -tol * max(1, largest |eigenvalue|).
 */
template <typename Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& m, typename Derived::Scalar tol) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) {
    throw ValidationError("is_psd: matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected square");
  }
  if (m.size() == 0) return true;
  const MatrixX<Scalar> sym = symmetrize(m);
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(sym, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  const Scalar scale = std::max<Scalar>(Scalar(1), ev.cwiseAbs().maxCoeff());
  return ev.minCoeff() >= -tol * scale;
}

/**
 * @brief LU factorization with partial pivoting and a pivot check.
 *
 * Construction throws SingularMatrixError when a pivot falls below
 * n * eps * max|lhs|; the factor can then be reused for several solves.
 */
template <typename Scalar>
class LuFactor {
 public:
  template <typename Derived>
  explicit LuFactor(const Eigen::MatrixBase<Derived>& lhs) : n_(lhs.rows()) {
    if (lhs.cols() != n_) {
      throw ValidationError("solve_linear: lhs is " + std::to_string(lhs.rows()) + "x" +
                            std::to_string(lhs.cols()) + ", expected square");
    }
    if (n_ == 0) return;
    lu_.compute(lhs);
    const auto& packed = lu_.matrixLU();
    const Scalar tol = Scalar(n_) * std::numeric_limits<Scalar>::epsilon() * max_abs(lhs);
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (!(std::abs(packed(i, i)) > tol)) {
        throw SingularMatrixError(
            "solve_linear: matrix is singular to working precision at pivot " + std::to_string(i),
            static_cast<long>(i));
      }
    }
  }

  template <typename Derived>
  MatrixX<Scalar> solve(const Eigen::MatrixBase<Derived>& rhs) const {
    if (rhs.rows() != n_) {
      throw ValidationError("solve_linear: rhs has " + std::to_string(rhs.rows()) +
                            " rows, expected " + std::to_string(n_));
    }
    if (n_ == 0) return MatrixX<Scalar>(0, rhs.cols());
    return lu_.solve(rhs);
  }

 private:
  Eigen::Index n_;
  Eigen::PartialPivLU<MatrixX<Scalar>> lu_;
};

/// Solve lhs * X = rhs; see LuFactor for the singularity criterion.
template <typename DerivedL, typename DerivedR>
MatrixX<typename DerivedL::Scalar> solve_linear(const Eigen::MatrixBase<DerivedL>& lhs,
                                                const Eigen::MatrixBase<DerivedR>& rhs) {
  return LuFactor<typename DerivedL::Scalar>(lhs).solve(rhs);
}

/**
 * Matrix exponential by scaling and squaring with Padé approximants of
 * degree 3, 5, 7, 9 or 13 (Higham 2005 coefficients and theta_m).
 */
template <typename Derived>
MatrixX<typename Derived::Scalar> expm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Mat = MatrixX<Scalar>;
  const Eigen::Index n = m.rows();
  if (m.cols() != n) {
    throw ValidationError("expm: matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected square");
  }
  if (!m.allFinite()) {
    throw ValidationError("expm: non-finite entry in input");
  }
  if (n == 0) return Mat(0, 0);

  const Mat ident = Mat::Identity(n, n);
  const Scalar norm = norm1(m);
  if (norm == Scalar(0)) return ident;

  // Lower-degree approximants suffice below their theta_m.
  static constexpr std::array<double, 4> b3 = {120.0, 60.0, 12.0, 1.0};
  static constexpr std::array<double, 6> b5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static constexpr std::array<double, 8> b7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                               25200.0,    1512.0,    56.0,      1.0};
  static constexpr std::array<double, 10> b9 = {
      17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
      2162160.0,     110880.0,     3960.0,       90.0,        1.0};
  auto low_degree = [&](const auto& c) {
    const Mat a2 = m * m;
    Mat odd = Scalar(c[1]) * ident;
    Mat even = Scalar(c[0]) * ident;
    Mat power = ident;
    for (std::size_t k = 1; 2 * k < c.size(); ++k) {
      power = (power * a2).eval();
      odd += Scalar(c[2 * k + 1]) * power;
      even += Scalar(c[2 * k]) * power;
    }
    const Mat u = m * odd;
    return Mat(Eigen::PartialPivLU<Mat>(even - u).solve(even + u));
  };
  if (norm <= Scalar(1.495585217958292e-2)) return low_degree(b3);
  if (norm <= Scalar(2.539398330063230e-1)) return low_degree(b5);
  if (norm <= Scalar(9.504178996162932e-1)) return low_degree(b7);
  if (norm <= Scalar(2.097847961257068e0)) return low_degree(b9);

  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  int squarings = 0;
  if (norm > Scalar(theta13)) {
    squarings = static_cast<int>(std::ceil(std::log2(static_cast<double>(norm) / theta13)));
  }
  const Mat a = m * Scalar(std::ldexp(1.0, -squarings));
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;

  const Mat u_inner = a6 * (Scalar(b[13]) * a6 + Scalar(b[11]) * a4 + Scalar(b[9]) * a2) +
                      Scalar(b[7]) * a6 + Scalar(b[5]) * a4 + Scalar(b[3]) * a2 +
                      Scalar(b[1]) * ident;
  const Mat u = a * u_inner;
  const Mat v = a6 * (Scalar(b[12]) * a6 + Scalar(b[10]) * a4 + Scalar(b[8]) * a2) +
                Scalar(b[6]) * a6 + Scalar(b[4]) * a4 + Scalar(b[2]) * a2 +
                Scalar(b[0]) * ident;

  Mat result = Eigen::PartialPivLU<Mat>(v - u).solve(v + u);
  for (int i = 0; i < squarings; ++i) {
    result = (result * result).eval();
  }
  if (!result.allFinite()) {
    throw DivergenceError("expm: result overflowed", squarings);
  }
  return result;
}

}  // namespace lqdisc
