// Copyright (c) 2026 The pflsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pflsim/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "pflsim/errors.hpp"

namespace pflsim {

double spd_condition(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(A, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

Mat pseudo_inverse(const Mat& J, double max_condition) {
  if (J.size() == 0) throw DimensionMismatch("pseudo_inverse: empty matrix");
  const bool wide = J.rows() <= J.cols();
  const Mat gram = wide ? Mat(J * J.transpose()) : Mat(J.transpose() * J);
  const double cond = spd_condition(gram);
  if (!(cond <= max_condition)) {
    throw RankDeficient("Gram matrix condition number " + std::to_string(cond) +
                        " exceeds " + std::to_string(max_condition));
  }
  if (J.rows() == J.cols()) return J.partialPivLu().inverse();
  const Eigen::LDLT<Mat> ldlt(gram);
  if (wide) return J.transpose() * ldlt.solve(Mat::Identity(J.rows(), J.rows()));
  return ldlt.solve(J.transpose());
}

Vec rk4_step(const Vec& state, const Derivative& deriv, double dt) {
  auto eval = [&](const Vec& x) {
    Vec d = deriv(x);
    if (!all_finite(d)) throw NonFiniteDerivative("rk4_step: derivative is not finite");
    return d;
  };
  const Vec k1 = eval(state);
  const Vec k2 = eval(state + 0.5 * dt * k1);
  const Vec k3 = eval(state + 0.5 * dt * k2);
  const Vec k4 = eval(state + dt * k3);
  return state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double wrap_angle(double angle) {
  constexpr double pi = std::numbers::pi;
  double a = std::fmod(angle + pi, 2.0 * pi);
  if (a < 0.0) a += 2.0 * pi;
  a -= pi;
  // fmod maps +pi onto -pi; the half-open interval keeps +pi.
  if (a == -pi) a = pi;
  return a;
}

bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace pflsim
