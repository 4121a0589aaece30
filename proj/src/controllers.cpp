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

#include "pflsim/controllers.hpp"

#include <cmath>

#include "pflsim/errors.hpp"

namespace pflsim {

namespace {

void check_spd(const Mat& A, const char* what) {
  if (!A.isApprox(A.transpose(), 1e-12)) {
    throw ConfigError(std::string(what) + " must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(A, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw ConfigError(std::string(what) + " must be positive definite");
  }
}

void check_reference(const RobotModel& model, const Reference& ref) {
  const int n = model.task_dim();
  if (ref.pose.size() != n || ref.velocity.size() != n || ref.acceleration.size() != n) {
    throw DimensionMismatch("reference must have task dimension " + std::to_string(n));
  }
}

}  // namespace

Gains Gains::scalar(double kp, double kd, int task_dim) {
  return Gains{kp * Mat::Identity(task_dim, task_dim), kd * Mat::Identity(task_dim, task_dim)};
}

void Gains::validate(int task_dim) const {
  if (kp.rows() != task_dim || kp.cols() != task_dim || kd.rows() != task_dim ||
      kd.cols() != task_dim) {
    throw DimensionMismatch("gain matrices must be " + std::to_string(task_dim) + "x" +
                            std::to_string(task_dim));
  }
  check_spd(kp, "Kp");
  check_spd(kd, "Kd");
}

double DesiredInertia::directional_mass() const {
  return 1.0 / direction.cwiseAbs2().dot(inverse_diagonal);
}

DesiredInertia build_desired_inertia(const Mat& task_mobility, const Vec& u, double lambda,
                                     int translational_dim, double eps_u) {
  const int n = static_cast<int>(task_mobility.rows());
  if (task_mobility.cols() != n || u.size() != n) {
    throw DimensionMismatch("build_desired_inertia: mobility and direction sizes disagree");
  }
  if (translational_dim < 1 || translational_dim > n) {
    throw DimensionMismatch("build_desired_inertia: bad translational dimension");
  }
  if (!(lambda > 0.0) || !(lambda <= 1.0)) {
    throw ConfigError("build_desired_inertia: lambda must lie in (0, 1]");
  }
  if (std::abs(u.norm() - 1.0) > 1e-9 || !u.tail(n - translational_dim).isZero(0.0)) {
    throw DimensionMismatch("build_desired_inertia: direction must be a translational unit vector");
  }

  DesiredInertia out;
  out.lambda = lambda;
  out.direction = u;
  out.inverse_diagonal = task_mobility.diagonal();

  const Vec coupling = task_mobility.topRows(translational_dim) * u;  // sum_j u_j Mbar^-1_ij
  double kept = 0.0;      // sum of u_i^2 gamma_i over the raw-formula components
  double excluded = 0.0;  // same over the excluded ones
  for (int i = 0; i < translational_dim; ++i) {
    if (std::abs(u(i)) >= eps_u) {
      out.inverse_diagonal(i) = coupling(i) / (lambda * u(i));
      kept += u(i) * u(i) * out.inverse_diagonal(i);
    } else {
      out.excluded.push_back(i);
      excluded += u(i) * u(i) * out.inverse_diagonal(i);
    }
  }

  if (!out.excluded.empty()) {
    const double target = u.dot(task_mobility * u) / lambda;
    const double scale = (target - excluded) / kept;
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw DegenerateDirection("build_desired_inertia: cannot rescale to satisfy the constraint");
    }
    for (int i = 0; i < translational_dim; ++i) {
      if (std::abs(u(i)) >= eps_u) out.inverse_diagonal(i) *= scale;
    }
  }

  for (int i = 0; i < n; ++i) {
    if (!(out.inverse_diagonal(i) > 0.0)) {
      throw DegenerateDirection("build_desired_inertia: gamma_" + std::to_string(i + 1) +
                                " is not positive");
    }
  }
  return out;
}

ControlCommand pd_control(const RobotModel& model, const Vec& q, const Vec& qd,
                          const Vec& pose_d, const Gains& gains) {
  const Mat J = model.jacobian(q);
  const Vec e = model.task_error(model.forward_kinematics(q), pose_d);
  return {-J.transpose() * (gains.kp * e) - J.transpose() * (gains.kd * (J * qd)) +
          model.gravity(q)};
}

namespace {

// Shared tail of the CTM and impedance laws: u = M J^+ (a - J' q') + C q' + G.
Vec feedback_linearize(const RobotModel& model, const Vec& q, const Vec& qd, const Mat& J,
                       const Vec& task_accel, const NullSpaceTask& null_task) {
  const Mat J_pinv = pseudo_inverse(J);
  Vec y = J_pinv * (task_accel - model.jacobian_dot_qdot(q, qd));
  if (null_task.active() && J.cols() > J.rows()) {
    Vec z = -null_task.damping * qd;
    if (null_task.posture.size() > 0) {
      if (null_task.posture.size() != q.size()) {
        throw DimensionMismatch("null-space posture has the wrong size");
      }
      z -= null_task.stiffness *
           (q - null_task.posture).unaryExpr([](double a) { return wrap_angle(a); });
    }
    y += z - J_pinv * (J * z);
  }
  return model.mass_matrix(q) * y + model.coriolis(q, qd) + model.gravity(q);
}

}  // namespace

ControlCommand ctm_control(const RobotModel& model, const Vec& q, const Vec& qd,
                           const Reference& ref, const Gains& gains,
                           const NullSpaceTask& null_task) {
  check_reference(model, ref);
  const Mat J = model.jacobian(q);
  const Vec e = model.task_error(model.forward_kinematics(q), ref.pose);
  const Vec e_dot = J * qd - ref.velocity;
  const Vec a = ref.acceleration - gains.kd * e_dot - gains.kp * e;
  return {feedback_linearize(model, q, qd, J, a, null_task)};
}

ControlCommand impedance_control(const RobotModel& model, const Vec& q, const Vec& qd,
                                 const Reference& ref, const Gains& gains,
                                 const DesiredInertia& inertia, const Vec& f_ext,
                                 const NullSpaceTask& null_task) {
  check_reference(model, ref);
  if (f_ext.size() != model.task_dim() || inertia.inverse_diagonal.size() != model.task_dim()) {
    throw DimensionMismatch("impedance_control: force or inertia has the wrong dimension");
  }
  const Mat J = model.jacobian(q);
  const Vec e = model.task_error(model.forward_kinematics(q), ref.pose);
  const Vec e_dot = J * qd - ref.velocity;
  // Md^-1 (Md r_d'' - Kd e' - Kp e + F) with the Md J' q' term folded into feedback_linearize.
  const Vec a = ref.acceleration +
                inertia.inverse_diagonal.cwiseProduct(-gains.kd * e_dot - gains.kp * e + f_ext);
  return {feedback_linearize(model, q, qd, J, a, null_task) - J.transpose() * f_ext};
}

std::string to_string(ControllerType type) {
  switch (type) {
    case ControllerType::kPD:
      return "pd";
    case ControllerType::kCTM:
      return "ctm";
    case ControllerType::kImpedance:
      return "impedance";
  }
  return "?";
}

ControllerType controller_type_from_string(const std::string& name) {
  if (name == "pd") return ControllerType::kPD;
  if (name == "ctm") return ControllerType::kCTM;
  if (name == "impedance") return ControllerType::kImpedance;
  throw ConfigError("unknown controller type '" + name + "'");
}

Controller::Controller(ControllerSpec spec) : spec_(std::move(spec)) {
  if (spec_.type == ControllerType::kImpedance &&
      (!(spec_.lambda > 0.0) || !(spec_.lambda <= 1.0))) {
    throw ConfigError("impedance lambda must lie in (0, 1]");
  }
}

Controller::Output Controller::compute(const RobotModel& model, const Vec& q, const Vec& qd,
                                       const Reference& ref, const Vec& direction,
                                       const Vec& f_ext) const {
  switch (spec_.type) {
    case ControllerType::kPD:
      return {pd_control(model, q, qd, ref.pose, spec_.gains).torques, false};
    case ControllerType::kCTM:
      return {ctm_control(model, q, qd, ref, spec_.gains, spec_.null_task).torques, false};
    case ControllerType::kImpedance:
      break;
  }

  const Mat J = model.jacobian(q);
  const Mat mobility = J * model.mass_matrix(q).llt().solve(J.transpose());
  Vec u = Vec::Zero(model.task_dim());
  u.head(model.translational_dim()) = direction;

  Output out;
  DesiredInertia inertia;
  try {
    inertia = build_desired_inertia(mobility, u, spec_.lambda, model.translational_dim());
  } catch (const DegenerateDirection&) {
    inertia.inverse_diagonal = mobility.diagonal();
    inertia.lambda = 1.0;
    inertia.direction = u;
    out.degenerate_direction = true;
  }
  const Vec force = spec_.force_feedback ? f_ext : Vec::Zero(model.task_dim());
  out.torques = impedance_control(model, q, qd, ref, spec_.gains, inertia, force,
                                   spec_.null_task)
                     .torques;
  return out;
}

}  // namespace pflsim
