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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pflsim/controllers.hpp"
#include "pflsim/numerics.hpp"
#include "pflsim/planner.hpp"
#include "pflsim/robot_model.hpp"
#include "pflsim/safety_pfl.hpp"

namespace pflsim {

/// Task coordinate `coordinate` has settled once it stays within
/// (1 - fraction) * |goal| of its goal value for `hold` seconds.
/// With kAllCoordinates the pose has settled once every coordinate has.
struct SettlingCriterion {
  static constexpr int kAllCoordinates = -1;
  int coordinate = 0;
  double fraction = 0.95;
  double hold = 0.2;
};

/// Human body region modelled as a free point mass behind a linear spring,
/// touching the tool once it enters a sphere around the human position.
struct ContactSpec {
  bool enabled = false;
  double human_radius = 0.1;
};

enum class ErrorReference { kSetpoint, kGoal };

struct Scenario {
  std::string name;
  std::shared_ptr<const RobotModel> model;
  ControllerSpec controller;
  PlanState plan;
  Vec q0;
  Vec qd0;  ///< empty means at rest
  double dt = 1e-3;
  double t_max = 10.0;
  SettlingCriterion settling;
  /// End the run once the settling coordinate has settled (including the hold).
  bool stop_on_settle = false;
  ContactSpec contact;
  ErrorReference error_reference = ErrorReference::kSetpoint;

  void validate() const;
};

struct StepRecord {
  double t = 0.0;
  Vec q;
  Vec qd;
  Vec pose;        ///< r
  Vec velocity;    ///< r'
  Vec pose_d;      ///< planner setpoint r_d
  Vec velocity_d;  ///< r_d'
  double v_rel = 0.0;  ///< end-effector speed toward the human
  double v_cap = 0.0;  ///< |v_rel,max|
  double v_cmd = 0.0;  ///< commanded path speed
  Vec tau_cmd;         ///< controller output
  Vec tau;             ///< after magnitude and rate limiting
  double m_eff = 0.0;
  Vec human;           ///< current human position (moves only when pushed)
  double contact_force = 0.0;
  std::string event;   ///< '|'-separated controller/planner events
};

struct TrajectoryLog {
  std::string name;
  double dt = 0.0;
  int dof = 0;
  int task_dim = 0;
  int translational_dim = 0;
  Vec goal;
  std::vector<StepRecord> steps;
};

/// Fixed-step closed loop: planner, controller, torque limiting, RK4
/// integration of the rigid-body dynamics. Deterministic.
TrajectoryLog run(const Scenario& scenario);

struct JointLimitReport {
  double max_torque = 0.0;
  double max_rate = 0.0;  ///< N m / s
  bool torque_ok = true;
  bool rate_ok = true;
};

struct TorqueLimitReport {
  std::vector<JointLimitReport> joints;
  bool passed = true;
  std::optional<int> first_violation;  ///< zero-based joint index
};

/// Checks applied torques against the model's magnitude and rate limits.
TorqueLimitReport check_torque_limits(const TrajectoryLog& log, const RobotModel& model);

/// Peak contact force (N) if the end-effector entered the human sphere.
///
/// Runs with contact enabled log the spring force directly; otherwise the
/// force is reconstructed as k * penetration from the logged path.
std::optional<double> contact_probe(const TrajectoryLog& log, const BodyRegion& region,
                                    double human_radius);

}  // namespace pflsim
