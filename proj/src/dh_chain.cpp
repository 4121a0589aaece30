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

#include <cmath>

#include "pflsim/errors.hpp"
#include "pflsim/robot_model.hpp"

namespace pflsim {

namespace {

using Eigen::Matrix3d;
using Eigen::Vector3d;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

Matrix3d skew(const Vector3d& v) {
  Matrix3d S;
  S << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return S;
}

// Spatial inertia about the world origin in [omega; v_origin] coordinates.
Matrix6d spatial_inertia(double mass, const Vector3d& com, const Matrix3d& inertia) {
  const Matrix3d S = skew(com);
  Matrix6d I;
  I.topLeftCorner<3, 3>() = inertia + mass * S * S.transpose();
  I.topRightCorner<3, 3>() = mass * S;
  I.bottomLeftCorner<3, 3>() = mass * S.transpose();
  I.bottomRightCorner<3, 3>() = mass * Matrix3d::Identity();
  return I;
}

bool symmetric_positive_definite(const Matrix3d& I) {
  if (!I.isApprox(I.transpose(), 1e-12)) return false;
  Eigen::SelfAdjointEigenSolver<Matrix3d> eig(I, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() > 0.0;
}

}  // namespace

Eigen::Isometry3d mdh_transform(const DHRow& row, double q) {
  Eigen::Isometry3d T = Eigen::Isometry3d::Identity();
  T.rotate(Eigen::AngleAxisd(row.alpha, Vector3d::UnitX()));
  T.translate(Vector3d(row.a, 0.0, 0.0));
  T.rotate(Eigen::AngleAxisd(q + row.theta_offset, Vector3d::UnitZ()));
  T.translate(Vector3d(0.0, 0.0, row.d));
  return T;
}

Vector3d rotation_to_rpy(const Matrix3d& R) {
  const double pitch = std::atan2(-R(2, 0), std::hypot(R(0, 0), R(1, 0)));
  const double roll = std::atan2(R(2, 1), R(2, 2));
  const double yaw = std::atan2(R(1, 0), R(0, 0));
  return {wrap_angle(roll), wrap_angle(pitch), wrap_angle(yaw)};
}

Matrix3d rpy_to_rotation(const Vector3d& rpy) {
  return (Eigen::AngleAxisd(rpy(2), Vector3d::UnitZ()) *
          Eigen::AngleAxisd(rpy(1), Vector3d::UnitY()) *
          Eigen::AngleAxisd(rpy(0), Vector3d::UnitX()))
      .toRotationMatrix();
}

Matrix3d rpy_rate_to_angular_velocity(const Vector3d& rpy) {
  // omega = yaw' z + pitch' Rz y + roll' Rz Ry x
  const double cb = std::cos(rpy(1)), sb = std::sin(rpy(1));
  const double cg = std::cos(rpy(2)), sg = std::sin(rpy(2));
  Matrix3d E;
  E << cg * cb, -sg, 0.0,
       sg * cb, cg, 0.0,
       -sb, 0.0, 1.0;
  return E;
}

DHChain::DHChain(std::string name, std::vector<DHRow> joints, std::vector<LinkInertia> links,
                 DHRow tool, Vector3d gravity)
    : RobotModel(std::move(name)),
      joints_(std::move(joints)),
      links_(std::move(links)),
      tool_(tool),
      gravity_(std::move(gravity)) {
  if (joints_.empty()) throw ConfigError("DH chain has no joints");
  if (joints_.size() != links_.size()) {
    throw ConfigError("DH chain needs one inertial entry per joint");
  }
  for (std::size_t i = 0; i < links_.size(); ++i) {
    if (!(links_[i].mass > 0.0)) {
      throw ConfigError("link " + std::to_string(i + 1) + " mass must be positive");
    }
    if (!symmetric_positive_definite(links_[i].inertia)) {
      throw ConfigError("link " + std::to_string(i + 1) +
                        " inertia tensor must be symmetric positive definite");
    }
  }
}

std::vector<Eigen::Isometry3d> DHChain::frames(const Vec& q) const {
  check_q(q);
  std::vector<Eigen::Isometry3d> out;
  out.reserve(joints_.size() + 1);
  Eigen::Isometry3d T = Eigen::Isometry3d::Identity();
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    T = T * mdh_transform(joints_[i], q(static_cast<Eigen::Index>(i)));
    out.push_back(T);
  }
  out.push_back(T * mdh_transform(tool_, 0.0));
  return out;
}

Eigen::Isometry3d DHChain::tool_pose(const Vec& q) const { return frames(q).back(); }

Vec DHChain::forward_kinematics(const Vec& q) const {
  const Eigen::Isometry3d T = tool_pose(q);
  Vec r(6);
  r.head<3>() = T.translation();
  r.tail<3>() = rotation_to_rpy(T.linear());
  return r;
}

Mat DHChain::geometric_jacobian(const Vec& q) const {
  const auto T = frames(q);
  const Vector3d tip = T.back().translation();
  Mat J(6, dof());
  for (int i = 0; i < dof(); ++i) {
    const Vector3d z = T[i].linear().col(2);
    J.block<3, 1>(0, i) = z.cross(tip - T[i].translation());
    J.block<3, 1>(3, i) = z;
  }
  return J;
}

Mat DHChain::jacobian(const Vec& q) const {
  Mat J = geometric_jacobian(q);
  const Vector3d rpy = rotation_to_rpy(tool_pose(q).linear());
  const Matrix3d E = rpy_rate_to_angular_velocity(rpy);
  J.bottomRows<3>() = E.partialPivLu().solve(J.bottomRows<3>());
  return J;
}

Vec DHChain::jacobian_dot_qdot(const Vec& q, const Vec& qd) const {
  check_q(qd);
  const double speed = qd.lpNorm<Eigen::Infinity>();
  if (speed == 0.0) return Vec::Zero(6);
  // Central difference of J along the joint-velocity direction.
  const double h = 1e-6 / std::max(1.0, speed);
  const Mat dJ = (jacobian(q + h * qd) - jacobian(q - h * qd)) / (2.0 * h);
  return dJ * qd;
}

Mat DHChain::mass_matrix(const Vec& q) const {
  const auto T = frames(q);
  const int n = dof();
  std::vector<Vector6d> axes(n);
  std::vector<Matrix6d> composite(n);
  for (int i = 0; i < n; ++i) {
    const Matrix3d& R = T[i].linear();
    const Vector3d z = R.col(2);
    axes[i] << z, T[i].translation().cross(z);
    const LinkInertia& link = links_[i];
    composite[i] = spatial_inertia(link.mass, T[i] * link.com,
                                   R * link.inertia * R.transpose());
  }
  for (int i = n - 2; i >= 0; --i) composite[i] += composite[i + 1];

  Mat M(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      M(i, j) = axes[i].dot(composite[j] * axes[j]);
      M(j, i) = M(i, j);
    }
  }
  return M;
}

Vec DHChain::inverse_dynamics(const Vec& q, const Vec& qd, const Vec& qdd,
                              const Vector3d& gravity) const {
  check_q(qd);
  check_q(qdd);
  const auto T = frames(q);
  const int n = dof();

  std::vector<Vector3d> origin(n), axis(n), com(n), force(n), moment(n);
  std::vector<Matrix3d> inertia(n);
  Vector3d omega = Vector3d::Zero();
  Vector3d omega_dot = Vector3d::Zero();
  Vector3d accel = -gravity;  // gravity enters as a base acceleration
  Vector3d prev_origin = Vector3d::Zero();

  for (int i = 0; i < n; ++i) {
    origin[i] = T[i].translation();
    axis[i] = T[i].linear().col(2);
    const Vector3d step = origin[i] - prev_origin;
    accel += omega_dot.cross(step) + omega.cross(omega.cross(step));
    const Vector3d joint_rate = axis[i] * qd(i);
    omega_dot += axis[i] * qdd(i) + omega.cross(joint_rate);
    omega += joint_rate;

    const LinkInertia& link = links_[i];
    com[i] = T[i] * link.com;
    inertia[i] = T[i].linear() * link.inertia * T[i].linear().transpose();
    const Vector3d arm = com[i] - origin[i];
    const Vector3d com_accel = accel + omega_dot.cross(arm) + omega.cross(omega.cross(arm));
    force[i] = link.mass * com_accel;
    moment[i] = inertia[i] * omega_dot + omega.cross(inertia[i] * omega);
    prev_origin = origin[i];
  }

  Vec tau(n);
  Vector3d f_child = Vector3d::Zero();
  Vector3d n_child = Vector3d::Zero();
  for (int i = n - 1; i >= 0; --i) {
    Vector3d n_i = moment[i] + n_child + (com[i] - origin[i]).cross(force[i]);
    if (i + 1 < n) n_i += (origin[i + 1] - origin[i]).cross(f_child);
    const Vector3d f_i = force[i] + f_child;
    tau(i) = axis[i].dot(n_i);
    f_child = f_i;
    n_child = n_i;
  }
  return tau;
}

Vec DHChain::coriolis(const Vec& q, const Vec& qd) const {
  return inverse_dynamics(q, qd, Vec::Zero(dof()), Vector3d::Zero());
}

Vec DHChain::gravity(const Vec& q) const {
  return inverse_dynamics(q, Vec::Zero(dof()), Vec::Zero(dof()), gravity_);
}

Mat DHChain::coriolis_matrix(const Vec& q, const Vec& qd) const {
  check_q(qd);
  const int n = dof();
  // Fourth-order central stencil: truncation and round-off both stay near 1e-12.
  constexpr double h = 1e-3;
  std::vector<Mat> dM(n);
  for (int k = 0; k < n; ++k) {
    Vec dq = Vec::Zero(n);
    dq(k) = h;
    dM[k] = (8.0 * (mass_matrix(q + dq) - mass_matrix(q - dq)) -
             (mass_matrix(q + 2.0 * dq) - mass_matrix(q - 2.0 * dq))) /
            (12.0 * h);
  }
  Mat C = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        C(k, j) += 0.5 * (dM[i](k, j) + dM[j](k, i) - dM[k](i, j)) * qd(i);
      }
    }
  }
  return C;
}

double DHChain::total_mass() const {
  double m = 0.0;
  for (const auto& l : links_) m += l.mass;
  return m;
}

}  // namespace pflsim
