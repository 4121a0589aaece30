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

#include "pflsim/planner.hpp"

#include <algorithm>

#include "pflsim/errors.hpp"

namespace pflsim {

Waypoint plan_step(const PlanState& state, const Vec& setpoint, const RobotModel& model,
                   const Vec& q, double dt) {
  const int nt = model.translational_dim();
  const int n = model.task_dim();
  if (!(dt > 0.0)) throw ConfigError("plan_step: dt must be positive");
  if (setpoint.size() != n || state.goal.size() != n || state.human.size() != nt) {
    throw DimensionMismatch("plan_step: pose, goal or human position has the wrong size");
  }

  const Vec position = setpoint.head(nt);
  const Vec to_goal = state.goal.head(nt) - position;
  const double remaining = to_goal.norm();

  Waypoint wp;
  const Vec ee = model.forward_kinematics(q).head(nt);
  Vec toward = state.human - ee;
  if (toward.norm() > kMinHumanDistance) {
    wp.toward_human = toward.normalized();
  } else if (remaining > 0.0) {
    // On top of the human: treat the path direction as the contact direction.
    wp.toward_human = to_goal / remaining;
  } else {
    throw ConfigError("plan_step: end-effector coincides with the human at the goal");
  }
  wp.effective_mass = effective_mass(state.mass_method, model, q, wp.toward_human);
  wp.v_rel_cap = v_rel_max(state.region, wp.effective_mass);

  if (remaining < state.goal_tolerance) {
    wp.pose = state.goal;
    wp.velocity = Vec::Zero(n);
    wp.acceleration = Vec::Zero(n);
    wp.at_goal = true;
    return wp;
  }

  const Vec direction = to_goal / remaining;
  const double alignment = wp.toward_human.dot(direction);
  double speed = wp.v_rel_cap * alignment;
  if (alignment < 0.0 && speed < state.v_floor) {
    speed = state.v_floor;
    wp.floor_clamped = true;
  }
  speed = std::max(speed, 0.0);
  if (state.speed_override) speed = *state.speed_override;
  wp.v_max = speed;

  const double step = std::min(speed * dt, remaining);
  const double fraction = step / remaining;
  wp.pose = setpoint;
  wp.velocity = Vec::Zero(n);
  wp.pose.head(nt) = position + direction * step;
  wp.velocity.head(nt) = direction * (step / dt);
  for (int i = nt; i < n; ++i) {
    const double delta = wrap_angle(state.goal(i) - setpoint(i)) * fraction;
    wp.pose(i) = wrap_angle(setpoint(i) + delta);
    wp.velocity(i) = delta / dt;
  }
  wp.acceleration = Vec::Zero(n);
  return wp;
}

}  // namespace pflsim
