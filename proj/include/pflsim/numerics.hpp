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

#pragma once

#include <functional>

#include <Eigen/Dense>

namespace pflsim {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kDefaultMaxCondition = 1e12;

/// Moore-Penrose inverse of a full-rank matrix.
///
/// Wide matrices get the right inverse J^T (J J^T)^-1, tall ones the left
/// inverse (J^T J)^-1 J^T and square ones the plain inverse. Throws
/// RankDeficient when the Gram matrix condition number exceeds
/// `max_condition`.
Mat pseudo_inverse(const Mat& J, double max_condition = kDefaultMaxCondition);

/// Spectral condition number of a symmetric positive semi-definite matrix.
double spd_condition(const Mat& A);

using Derivative = std::function<Vec(const Vec&)>;

/// One classical fourth-order Runge-Kutta step of x' = f(x).
Vec rk4_step(const Vec& state, const Derivative& deriv, double dt);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

bool all_finite(const Vec& v);

}  // namespace pflsim
