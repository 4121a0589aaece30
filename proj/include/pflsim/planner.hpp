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

#include <optional>

#include "pflsim/numerics.hpp"
#include "pflsim/robot_model.hpp"
#include "pflsim/safety_pfl.hpp"

namespace pflsim {

/// Fixed inputs of the online speed-capped planner. The human is stationary.
struct PlanState {
  Vec human;  ///< translational position of the human body region
  Vec goal;   ///< full task pose
  BodyRegion region;
  EffectiveMassMethod mass_method = OperationalSpace{};
  /// Minimum commanded speed while the path leads away from the human.
  double v_floor = 0.05;
  double goal_tolerance = 1e-3;
  /// Replaces the ISO cap with a fixed path speed (test and demo runs only).
  std::optional<double> speed_override;
};

inline constexpr double kMinHumanDistance = 1e-6;

/// Next setpoint of the straight-line path plus the safety quantities it was
/// derived from.
struct Waypoint {
  Vec pose;
  Vec velocity;
  Vec acceleration;
  double v_max = 0.0;      ///< commanded path speed
  double v_rel_cap = 0.0;  ///< |v_rel,max| toward the human
  double effective_mass = 0.0;
  Vec toward_human;        ///< unit vector from the end-effector to the human
  bool at_goal = false;
  bool floor_clamped = false;
};

/// Advances the commanded pose `setpoint` by one step of length dt.
///
/// The speed cap is evaluated at the arm's current configuration `q` along the
/// direction from the end-effector to the human and projected onto the path
/// direction (from `setpoint` to the goal). Orientation moves by the same
/// path fraction as position. Within the goal tolerance the goal pose is
/// returned with zero velocity.
Waypoint plan_step(const PlanState& state, const Vec& setpoint, const RobotModel& model,
                   const Vec& q, double dt);

}  // namespace pflsim
