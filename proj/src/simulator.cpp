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

#include "pflsim/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "pflsim/errors.hpp"
#include "pflsim/metrics.hpp"

namespace pflsim {

namespace {

constexpr double kDivergenceNorm = 1e6;

struct ContactState {
  Vec force;  // on the robot, translational
  double magnitude = 0.0;
};

ContactState spring_contact(const Vec& ee, const Vec& human, const BodyRegion& region,
                            double radius) {
  ContactState out{Vec::Zero(ee.size()), 0.0};
  const Vec offset = ee - human;
  const double distance = offset.norm();
  const double penetration = radius - distance;
  if (penetration > 0.0 && distance > 0.0) {
    out.magnitude = region.spring_n_per_m() * penetration;
    out.force = out.magnitude * offset / distance;
  }
  return out;
}

PlanState plan_with_human(PlanState plan, const Vec& human) {
  plan.human = human;
  return plan;
}

void join_event(std::string& events, const char* what) {
  if (!events.empty()) events += '|';
  events += what;
}

}  // namespace

void Scenario::validate() const {
  if (!model) throw ConfigError("scenario has no robot model");
  const int n = model->dof();
  const int nt = model->translational_dim();
  if (!(dt > 0.0) || dt > 0.01) throw ConfigError("dt must lie in (0, 0.01] s");
  if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
  if (q0.size() != n) throw ConfigError("q0 must have " + std::to_string(n) + " entries");
  if (qd0.size() != 0 && qd0.size() != n) throw ConfigError("qd0 has the wrong size");
  if (plan.human.size() != nt) throw ConfigError("human position has the wrong size");
  if (plan.goal.size() != model->task_dim()) throw ConfigError("goal pose has the wrong size");
  if (settling.coordinate != SettlingCriterion::kAllCoordinates &&
      (settling.coordinate < 0 || settling.coordinate >= model->task_dim())) {
    throw ConfigError("settling coordinate out of range");
  }
  if (!(settling.fraction > 0.0 && settling.fraction < 1.0) || settling.hold < 0.0) {
    throw ConfigError("settling fraction must lie in (0, 1) and hold must be non-negative");
  }
  if (contact.enabled && !(contact.human_radius > 0.0)) {
    throw ConfigError("contact human_radius must be positive");
  }
  controller.gains.validate(model->task_dim());
}

TrajectoryLog run(const Scenario& scenario) {
  scenario.validate();
  const RobotModel& model = *scenario.model;
  const int n = model.dof();
  const int nt = model.translational_dim();
  const int task = model.task_dim();
  const double dt = scenario.dt;
  const bool contact = scenario.contact.enabled;
  const BodyRegion& region = scenario.plan.region;
  const Controller controller(scenario.controller);

  TrajectoryLog log;
  log.name = scenario.name;
  log.dt = dt;
  log.dof = n;
  log.task_dim = task;
  log.translational_dim = nt;
  log.goal = scenario.plan.goal;

  // State: q, q' and, with contact, the human displacement and its rate.
  Vec state = Vec::Zero(2 * n + (contact ? 2 * nt : 0));
  state.head(n) = scenario.q0;
  if (scenario.qd0.size() == n) state.segment(n, n) = scenario.qd0;

  const Vec& tau_limit = model.torque_limits();
  const Vec& rate_limit = model.torque_rate_limits();
  Vec tau_prev = model.gravity(scenario.q0);
  if (tau_limit.size() == n) tau_prev = tau_prev.cwiseMax(-tau_limit).cwiseMin(tau_limit);

  Vec setpoint = model.forward_kinematics(scenario.q0);
  const auto steps = static_cast<std::size_t>(std::llround(scenario.t_max / dt));
  log.steps.reserve(steps);
  std::size_t in_band_steps = 0;

  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    try {
      const Vec q = state.head(n);
      const Vec qd = state.segment(n, n);
      const Vec human = contact ? Vec(scenario.plan.human + state.segment(2 * n, nt))
                                : scenario.plan.human;

      StepRecord rec;
      rec.t = t;
      rec.q = q;
      rec.qd = qd;
      rec.pose = model.forward_kinematics(q);
      rec.velocity = model.task_velocity(q, qd);
      rec.human = human;

      // With contact the human can be pushed; plan against where it is now.
      const Waypoint wp = contact ? plan_step(plan_with_human(scenario.plan, human), setpoint,
                                              model, q, dt)
                                  : plan_step(scenario.plan, setpoint, model, q, dt);
      setpoint = wp.pose;
      rec.pose_d = wp.pose;
      rec.velocity_d = wp.velocity;
      rec.v_cap = wp.v_rel_cap;
      rec.v_cmd = wp.v_max;
      rec.m_eff = wp.effective_mass;
      rec.v_rel = wp.toward_human.dot(rec.velocity.head(nt));
      if (wp.floor_clamped) join_event(rec.event, "floor_clamp");

      Vec f_ext = Vec::Zero(task);
      if (contact) {
        const ContactState c =
            spring_contact(rec.pose.head(nt), human, region, scenario.contact.human_radius);
        f_ext.head(nt) = c.force;
        rec.contact_force = c.magnitude;
        if (c.magnitude > 0.0) join_event(rec.event, "contact");
      }

      const Reference ref{wp.pose, wp.velocity, wp.acceleration};
      const Controller::Output out =
          controller.compute(model, q, qd, ref, wp.toward_human, f_ext);
      if (out.degenerate_direction) join_event(rec.event, "degenerate_direction");
      rec.tau_cmd = out.torques;

      Vec tau = out.torques;
      if (tau_limit.size() == n) tau = tau.cwiseMax(-tau_limit).cwiseMin(tau_limit);
      if (rate_limit.size() == n) {
        const Vec step_limit = rate_limit * dt;
        tau = tau.cwiseMax(tau_prev - step_limit).cwiseMin(tau_prev + step_limit);
      }
      if ((tau.array() != out.torques.array()).any()) join_event(rec.event, "saturated");
      rec.tau = tau;
      tau_prev = tau;
      log.steps.push_back(std::move(rec));

      const Derivative deriv = [&](const Vec& s) {
        const Vec qs = s.head(n);
        const Vec qds = s.segment(n, n);
        Vec rhs = tau - model.coriolis(qs, qds) - model.gravity(qs);
        Vec ds = Vec::Zero(s.size());
        if (contact) {
          const Vec hs = scenario.plan.human + s.segment(2 * n, nt);
          const Vec ee = model.forward_kinematics(qs).head(nt);
          const ContactState c = spring_contact(ee, hs, region, scenario.contact.human_radius);
          rhs += model.jacobian(qs).topRows(nt).transpose() * c.force;
          ds.segment(2 * n, nt) = s.segment(2 * n + nt, nt);
          ds.segment(2 * n + nt, nt) = -c.force / region.effective_mass;
        }
        ds.head(n) = qds;
        ds.segment(n, n) = model.mass_matrix(qs).llt().solve(rhs);
        return ds;
      };
      state = rk4_step(state, deriv, dt);
      if (!state.allFinite() || state.norm() > kDivergenceNorm) {
        throw NumericalDivergence("state norm exceeded " + std::to_string(kDivergenceNorm));
      }
    } catch (const SimulationError&) {
      throw;
    } catch (const Error& e) {
      throw SimulationError(k, t, e.what());
    }

    if (scenario.stop_on_settle) {
      const StepRecord& last = log.steps.back();
      if (pose_within_settling_band(scenario.settling, last.pose, log.goal, nt)) {
        if (static_cast<double>(in_band_steps++) * dt >= scenario.settling.hold) break;
      } else {
        in_band_steps = 0;
      }
    }
  }
  return log;
}

TorqueLimitReport check_torque_limits(const TrajectoryLog& log, const RobotModel& model) {
  const int n = model.dof();
  TorqueLimitReport report;
  report.joints.resize(n);
  const Vec& tau_limit = model.torque_limits();
  const Vec& rate_limit = model.torque_rate_limits();
  // Rounding slack for the hard clamp.
  constexpr double kRelTol = 1e-9;

  for (std::size_t k = 0; k < log.steps.size(); ++k) {
    const Vec& tau = log.steps[k].tau;
    for (int j = 0; j < n; ++j) {
      JointLimitReport& r = report.joints[j];
      r.max_torque = std::max(r.max_torque, std::abs(tau(j)));
      if (k > 0) {
        const double rate = std::abs(tau(j) - log.steps[k - 1].tau(j)) / log.dt;
        r.max_rate = std::max(r.max_rate, rate);
      }
    }
  }
  for (int j = 0; j < n; ++j) {
    JointLimitReport& r = report.joints[j];
    if (tau_limit.size() == n) r.torque_ok = r.max_torque <= tau_limit(j) * (1.0 + kRelTol);
    if (rate_limit.size() == n) r.rate_ok = r.max_rate <= rate_limit(j) * (1.0 + kRelTol);
    if ((!r.torque_ok || !r.rate_ok) && report.passed) {
      report.passed = false;
      report.first_violation = j;
    }
  }
  return report;
}

std::optional<double> contact_probe(const TrajectoryLog& log, const BodyRegion& region,
                                    double human_radius) {
  std::optional<double> peak;
  for (const StepRecord& s : log.steps) {
    const Vec ee = s.pose.head(log.translational_dim);
    const double penetration = human_radius - (ee - s.human).norm();
    const double force = s.contact_force > 0.0
                             ? s.contact_force
                             : std::max(penetration, 0.0) * region.spring_n_per_m();
    if (penetration > 0.0 || s.contact_force > 0.0) peak = std::max(peak.value_or(0.0), force);
  }
  return peak;
}

}  // namespace pflsim
