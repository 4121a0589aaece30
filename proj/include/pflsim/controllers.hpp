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

#include <string>
#include <vector>

#include "pflsim/numerics.hpp"
#include "pflsim/robot_model.hpp"

namespace pflsim {

/// Task-space stiffness and damping, both symmetric positive definite.
struct Gains {
  Mat kp;
  Mat kd;

  static Gains scalar(double kp, double kd, int task_dim);
  void validate(int task_dim) const;
};

/// Diagonal inverse of the desired task inertia, shaped so the apparent mass
/// along `direction` is lambda times the arm's own.
struct DesiredInertia {
  Vec inverse_diagonal;  ///< gamma_i
  double lambda = 1.0;
  Vec direction;  ///< task-dimension unit vector, rotational entries zero
  std::vector<int> excluded;  ///< near-zero direction components kept unreduced

  Mat inverse() const { return inverse_diagonal.asDiagonal(); }
  /// 1 / (u^T M_d^-1 u)
  double directional_mass() const;
};

inline constexpr double kDirectionEpsilon = 1e-3;

/// Builds M_d^-1 from the task-space mobility J M^-1 J^T (= inverse task
/// inertia).
///
/// Each translational gamma_i = (1 / (lambda u_i)) sum_j u_j Mbar^-1_ij.
/// Components with |u_i| < `eps_u` would blow up; they keep Mbar^-1_ii and the
/// others are rescaled by one common factor so that u^T M_d^-1 u still equals
/// u^T Mbar^-1 u / lambda. Rotational entries keep Mbar^-1_ii. Throws
/// DegenerateDirection when some gamma would not be positive.
DesiredInertia build_desired_inertia(const Mat& task_mobility, const Vec& u, double lambda,
                                     int translational_dim, double eps_u = kDirectionEpsilon);

/// Desired task trajectory sample.
struct Reference {
  Vec pose;
  Vec velocity;
  Vec acceleration;
};

struct ControlCommand {
  Vec torques;
};

/// u = -J^T Kp e - J^T Kd J q' + G
ControlCommand pd_control(const RobotModel& model, const Vec& q, const Vec& qd,
                          const Vec& pose_d, const Gains& gains);

/// Self-motion regulation for redundant arms. J^+ alone leaves the null space
/// of J uncontrolled, so the arm drifts into singular configurations. Adds
/// (I - J^+ J)(-damping q' - stiffness (q - posture)) to the joint
/// acceleration, which leaves the task dynamics untouched.
struct NullSpaceTask {
  double damping = 0.0;    ///< 1/s
  double stiffness = 0.0;  ///< 1/s^2
  Vec posture;             ///< empty: no posture term
  bool active() const { return damping != 0.0 || (stiffness != 0.0 && posture.size() > 0); }
};

/// u = M y + C q' + G,  y = J^+ (r_d'' - Kd e' - Kp e - J' q')
ControlCommand ctm_control(const RobotModel& model, const Vec& q, const Vec& qd,
                           const Reference& ref, const Gains& gains,
                           const NullSpaceTask& null_task = {});

/// u = M y + C q' + G - J^T F,
/// y = J^+ Md^-1 (Md r_d'' - Kd e' - Kp e - Md J' q' + F).
/// With F = 0 this is the force-free impedance law.
ControlCommand impedance_control(const RobotModel& model, const Vec& q, const Vec& qd,
                                 const Reference& ref, const Gains& gains,
                                 const DesiredInertia& inertia, const Vec& f_ext,
                                 const NullSpaceTask& null_task = {});

enum class ControllerType { kPD, kCTM, kImpedance };

std::string to_string(ControllerType type);
ControllerType controller_type_from_string(const std::string& name);

struct ControllerSpec {
  ControllerType type = ControllerType::kCTM;
  Gains gains;
  double lambda = 1.0;  ///< impedance only
  /// Impedance only: feed the measured contact force through the control law.
  bool force_feedback = true;
  /// CTM and impedance on redundant arms.
  NullSpaceTask null_task;
};

/// Dispatches a ControllerSpec. For the impedance controller the desired
/// inertia is rebuilt from the current configuration and contact direction on
/// every call; stiffness and damping never change.
class Controller {
 public:
  explicit Controller(ControllerSpec spec);

  struct Output {
    Vec torques;
    /// Desired-inertia redistribution failed and the unreduced diagonal was used.
    bool degenerate_direction = false;
  };

  /// `direction` is the translational unit vector toward the human; `f_ext`
  /// the task-space contact force (zero in free motion).
  Output compute(const RobotModel& model, const Vec& q, const Vec& qd, const Reference& ref,
                 const Vec& direction, const Vec& f_ext) const;

  const ControllerSpec& spec() const { return spec_; }

 private:
  ControllerSpec spec_;
};

}  // namespace pflsim
