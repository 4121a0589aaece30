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

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Geometry>
#include "json.hpp"

#include "pflsim/numerics.hpp"

namespace pflsim {

enum class Convention { kPlanar3R, kModifiedDH };

/// Terms of M(q) q'' + C(q, q') q' + G(q) = tau + J^T F_ext.
struct Dynamics {
  Mat mass;
  Vec coriolis;  ///< C(q, q') q'
  Vec gravity;
};

/// Kinematic and inertial description of a serial manipulator.
///
/// Task poses are plain vectors: translational coordinates first (x, y or
/// x, y, z), then angles (planar theta, or roll-pitch-yaw alpha, beta, gamma
/// with R = Rz(gamma) Ry(beta) Rx(alpha)). Angles are wrapped to (-pi, pi].
class RobotModel {
 public:
  virtual ~RobotModel() = default;

  const std::string& name() const { return name_; }
  virtual Convention convention() const = 0;
  virtual int dof() const = 0;
  virtual int task_dim() const = 0;
  virtual int translational_dim() const = 0;

  virtual Vec forward_kinematics(const Vec& q) const = 0;
  /// Analytic task Jacobian dr/dq; translational rows first.
  virtual Mat jacobian(const Vec& q) const = 0;
  /// d/dt(J) q' at (q, q').
  virtual Vec jacobian_dot_qdot(const Vec& q, const Vec& qd) const = 0;

  virtual Mat mass_matrix(const Vec& q) const = 0;
  /// Coriolis/centrifugal torque C(q, q') q'.
  virtual Vec coriolis(const Vec& q, const Vec& qd) const = 0;
  /// C(q, q') assembled from Christoffel symbols of M.
  virtual Mat coriolis_matrix(const Vec& q, const Vec& qd) const = 0;
  virtual Vec gravity(const Vec& q) const = 0;
  /// Sum of all moving link masses.
  virtual double total_mass() const = 0;

  Dynamics dynamics(const Vec& q, const Vec& qd) const;
  Vec task_velocity(const Vec& q, const Vec& qd) const;
  /// r - r_d with angular components wrapped.
  Vec task_error(const Vec& r, const Vec& r_d) const;
  Vec translational(const Vec& pose) const { return pose.head(translational_dim()); }

  /// Empty vectors mean "unlimited".
  const Vec& torque_limits() const { return torque_limits_; }
  const Vec& torque_rate_limits() const { return torque_rate_limits_; }
  void set_torque_limits(Vec limits, Vec rate_limits);

 protected:
  explicit RobotModel(std::string name) : name_(std::move(name)) {}
  void check_q(const Vec& q) const;

 private:
  std::string name_;
  Vec torque_limits_;
  Vec torque_rate_limits_;
};

/// Planar 3R arm of uniform thin rods moving in the x-y plane. The task is
/// (x, y, theta) of the tip of link 3.
class PlanarThreeR final : public RobotModel {
 public:
  struct Link {
    double length;
    double mass;
    double inertia;  ///< about the proximal joint
  };

  /// `gravity` is the acceleration of gravity in the plane, e.g. (0, -9.81).
  PlanarThreeR(std::string name, std::array<Link, 3> links, Eigen::Vector2d gravity);

  /// Reference arm: l = 2 m each, m = (8, 5, 5) kg, thin-rod inertias.
  static PlanarThreeR table_defaults(Eigen::Vector2d gravity = Eigen::Vector2d::Zero());

  Convention convention() const override { return Convention::kPlanar3R; }
  int dof() const override { return 3; }
  int task_dim() const override { return 3; }
  int translational_dim() const override { return 2; }

  Vec forward_kinematics(const Vec& q) const override;
  Mat jacobian(const Vec& q) const override;
  Vec jacobian_dot_qdot(const Vec& q, const Vec& qd) const override;
  Mat mass_matrix(const Vec& q) const override;
  Vec coriolis(const Vec& q, const Vec& qd) const override;
  Mat coriolis_matrix(const Vec& q, const Vec& qd) const override;
  Vec gravity(const Vec& q) const override;
  double total_mass() const override;

  const std::array<Link, 3>& links() const { return links_; }
  const Eigen::Vector2d& gravity_vector() const { return gravity_; }
  /// dM/dq_k for k = 0..2.
  std::array<Mat, 3> mass_matrix_derivatives(const Vec& q) const;

 private:
  std::array<Link, 3> links_;
  Eigen::Vector2d gravity_;
  // M = consts + b cos q2 + c cos q3 + d cos(q2 + q3) pattern.
  double a1_, a2_, a3_, b_, c_, d_;
};

/// One row of a modified Denavit-Hartenberg table:
/// T = RotX(alpha) TransX(a) RotZ(theta + offset) TransZ(d).
struct DHRow {
  double a = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double theta_offset = 0.0;
};

struct LinkInertia {
  double mass = 0.0;
  Eigen::Vector3d com = Eigen::Vector3d::Zero();  ///< in the link frame
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();  ///< about the COM, link axes
};

/// Revolute serial chain in modified DH convention. The task is the 6-D pose
/// (x, y, z, roll, pitch, yaw) of the tool frame. M(q) comes from the
/// composite-rigid-body algorithm, C(q, q') q' and G(q) from recursive
/// Newton-Euler.
class DHChain final : public RobotModel {
 public:
  DHChain(std::string name, std::vector<DHRow> joints, std::vector<LinkInertia> links,
          DHRow tool, Eigen::Vector3d gravity);

  Convention convention() const override { return Convention::kModifiedDH; }
  int dof() const override { return static_cast<int>(joints_.size()); }
  int task_dim() const override { return 6; }
  int translational_dim() const override { return 3; }

  Vec forward_kinematics(const Vec& q) const override;
  Mat jacobian(const Vec& q) const override;
  Vec jacobian_dot_qdot(const Vec& q, const Vec& qd) const override;
  Mat mass_matrix(const Vec& q) const override;
  Vec coriolis(const Vec& q, const Vec& qd) const override;
  Mat coriolis_matrix(const Vec& q, const Vec& qd) const override;
  Vec gravity(const Vec& q) const override;
  double total_mass() const override;

  /// Recursive Newton-Euler inverse dynamics with an explicit gravity vector.
  Vec inverse_dynamics(const Vec& q, const Vec& qd, const Vec& qdd,
                       const Eigen::Vector3d& gravity) const;
  /// Base-to-link frames 1..n followed by the tool frame.
  std::vector<Eigen::Isometry3d> frames(const Vec& q) const;
  Eigen::Isometry3d tool_pose(const Vec& q) const;
  /// Geometric Jacobian [v; omega] of the tool frame origin.
  Mat geometric_jacobian(const Vec& q) const;

  const std::vector<DHRow>& joints() const { return joints_; }
  const std::vector<LinkInertia>& links() const { return links_; }
  const DHRow& tool() const { return tool_; }
  const Eigen::Vector3d& gravity_vector() const { return gravity_; }

 private:
  std::vector<DHRow> joints_;
  std::vector<LinkInertia> links_;
  DHRow tool_;
  Eigen::Vector3d gravity_;
};

Eigen::Isometry3d mdh_transform(const DHRow& row, double q);

/// Roll-pitch-yaw (extrinsic x-y-z, R = Rz(yaw) Ry(pitch) Rx(roll)).
Eigen::Vector3d rotation_to_rpy(const Eigen::Matrix3d& R);
Eigen::Matrix3d rpy_to_rotation(const Eigen::Vector3d& rpy);
/// E(rpy) with omega = E * d(rpy)/dt.
Eigen::Matrix3d rpy_rate_to_angular_velocity(const Eigen::Vector3d& rpy);

std::shared_ptr<const RobotModel> robot_model_from_json(const nlohmann::json& doc);
std::shared_ptr<const RobotModel> load_robot_model(const std::filesystem::path& path);
/// Encodes a planar 3R arm as an equivalent modified-DH chain.
DHChain planar_three_r_as_dh(const PlanarThreeR& arm);

}  // namespace pflsim

namespace pflsim {

struct IkOptions {
  int max_iterations = 500;
  double tolerance = 1e-10;  ///< on the task error norm
  double damping = 1e-3;
  /// Solve only the translational coordinates.
  bool position_only = false;
};

/// Damped least-squares inverse kinematics from `seed`. Empty on failure.
std::optional<Vec> inverse_kinematics(const RobotModel& model, const Vec& target,
                                      const Vec& seed, const IkOptions& options = {});

}  // namespace pflsim
