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

#include "doctest.h"
#include "oracles.hpp"
#include "pflsim/errors.hpp"
#include "pflsim/metrics.hpp"
#include "pflsim/scenario.hpp"
#include "pflsim/simulator.hpp"

using namespace pflsim;

namespace {

Scenario shipped(const std::string& name) {
  return load_scenario(data_dir() / "scenarios" / (name + ".json"));
}

// The arm launched at `speed` straight at the human from just outside the
// contact sphere, with gains small enough that the rendered inertia alone
// governs the impact.
Scenario launched_at_human(double lambda, double speed) {
  Scenario s = shipped("3r_imp2");
  s.controller.lambda = lambda;
  s.controller.gains = Gains::scalar(1e-6, 1e-6, 3);
  s.plan.mass_method = Reduced{lambda};
  s.plan.human = Eigen::Vector2d(4.0, std::sqrt(2.0));
  const Vec start = Eigen::Vector3d(3.89, std::sqrt(2.0), -0.2);
  s.q0 = *inverse_kinematics(*s.model, start, s.q0);
  s.qd0 = s.model->jacobian(s.q0).inverse() * Eigen::Vector3d(speed, 0.0, 0.0);
  s.plan.goal = start;
  s.plan.goal(0) = 4.3;
  s.plan.speed_override = speed;
  s.contact.enabled = true;
  s.t_max = 0.3;
  return s;
}

// Shipped scenario with the goal moved onto the human.
Scenario into_human(const std::string& name) {
  Scenario s = shipped(name);
  s.plan.human = Eigen::Vector2d(4.0, std::sqrt(2.0));
  s.plan.goal.head(2) = s.plan.human;
  s.contact.enabled = true;
  s.t_max = 8.0;
  return s;
}

const StepRecord* first_contact(const TrajectoryLog& log) {
  for (const auto& s : log.steps) {
    if (s.contact_force > 0.0) return &s;
  }
  return nullptr;
}

double peak_force(const TrajectoryLog& log) {
  double peak = 0.0;
  for (const auto& s : log.steps) peak = std::max(peak, s.contact_force);
  return peak;
}

}  // namespace

TEST_SUITE("simulator") {
  TEST_CASE("an arm at rest on its goal stays put") {
    Scenario s = shipped("3r_pd");
    s.model = std::make_shared<PlanarThreeR>(PlanarThreeR::table_defaults());
    s.plan.goal = s.model->forward_kinematics(s.q0);
    s.t_max = 1.0;
    const TrajectoryLog log = run(s);
    REQUIRE(log.steps.size() == 1000);
    for (const auto& r : log.steps) {
      CHECK((r.q - s.q0).norm() == 0.0);
      CHECK(r.qd.norm() == 0.0);
    }
  }

  TEST_CASE("log layout") {
    Scenario s = shipped("3r_imp2");
    s.t_max = 0.5;
    const TrajectoryLog log = run(s);
    REQUIRE(log.steps.size() == 500);
    CHECK(log.dof == 3);
    CHECK(log.task_dim == 3);
    CHECK(log.translational_dim == 2);
    for (std::size_t k = 0; k < log.steps.size(); ++k) {
      const auto& r = log.steps[k];
      CHECK(r.t == doctest::Approx(k * 1e-3));
      CHECK(r.q.allFinite());
      CHECK(r.tau.allFinite());
      CHECK(r.v_cap > 0.0);
      CHECK(r.m_eff > 0.0);
    }
    CHECK(log.steps[0].pose.isApprox(s.model->forward_kinematics(s.q0)));
  }

  TEST_CASE("identical scenarios give bit-identical logs") {
    Scenario s = shipped("3r_imp1");
    s.t_max = 2.0;
    const TrajectoryLog a = run(s);
    const TrajectoryLog b = run(s);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t k = 0; k < a.steps.size(); ++k) {
      CHECK(a.steps[k].q == b.steps[k].q);
      CHECK(a.steps[k].tau == b.steps[k].tau);
      CHECK(a.steps[k].v_rel == b.steps[k].v_rel);
    }
  }

  TEST_CASE("halving the step barely moves the settling time") {
    for (const char* name : {"3r_pd", "3r_ctm", "3r_imp1", "3r_imp2"}) {
      Scenario s = shipped(name);
      const auto coarse = settling_time(run(s), s.settling);
      s.dt *= 0.5;
      const auto fine = settling_time(run(s), s.settling);
      REQUIRE(coarse.has_value());
      REQUIRE(fine.has_value());
      CHECK(std::abs(*coarse - *fine) / *fine < 0.005);
    }
  }

  TEST_CASE("torques are clamped to magnitude and rate limits") {
    Scenario s = shipped("3r_ctm");
    auto limited = std::make_shared<PlanarThreeR>(
        PlanarThreeR::table_defaults(Eigen::Vector2d(0.0, -9.81)));
    limited->set_torque_limits(Vec::Constant(3, 400.0), Vec::Constant(3, 2000.0));
    s.model = limited;
    s.t_max = 3.0;
    const TrajectoryLog log = run(s);
    const TorqueLimitReport report = check_torque_limits(log, *limited);
    CHECK(report.passed);
    bool saturated = false;
    for (const auto& r : log.steps) {
      CHECK(r.tau.cwiseAbs().maxCoeff() <= 400.0);
      saturated = saturated || r.event.find("saturated") != std::string::npos;
    }
    CHECK(saturated);
  }

  TEST_CASE("torque-limit report on synthetic logs") {
    const auto model = load_robot_model(data_dir() / "models" / "panda.json");
    TrajectoryLog log;
    log.dt = 1e-3;
    log.dof = 7;
    for (int k = 0; k < 10; ++k) {
      StepRecord r;
      r.tau = Vec::Constant(7, 5.0);
      log.steps.push_back(r);
    }
    TorqueLimitReport ok = check_torque_limits(log, *model);
    CHECK(ok.passed);
    CHECK(ok.joints[0].max_rate == 0.0);
    CHECK(ok.joints[0].max_torque == 5.0);
    log.steps[5].tau(2) += 2.0;  // 2000 N m/s jump
    const TorqueLimitReport bad = check_torque_limits(log, *model);
    CHECK_FALSE(bad.passed);
    REQUIRE(bad.first_violation.has_value());
    CHECK(*bad.first_violation == 2);
    CHECK(bad.joints[2].max_rate == doctest::Approx(2000.0));
    CHECK_FALSE(bad.joints[2].rate_ok);
    CHECK(bad.joints[2].torque_ok);
  }

  TEST_CASE("stop on settle ends the run after the hold") {
    Scenario s = shipped("3r_imp2");
    s.stop_on_settle = true;
    const TrajectoryLog log = run(s);
    const auto ts = settling_time(log, s.settling);
    REQUIRE(ts.has_value());
    CHECK(log.steps.back().t == doctest::Approx(*ts + s.settling.hold).epsilon(1e-3));
  }

  TEST_CASE("divergence is reported with the failing step") {
    Scenario s = shipped("3r_pd");
    s.controller.gains = Gains::scalar(1e9, 1e9, 3);
    s.dt = 0.01;
    try {
      run(s);
      FAIL("expected a simulation error");
    } catch (const SimulationError& e) {
      CHECK(e.step() < 100);
      CHECK(std::string(e.what()).find("step") == 0);
    }
  }

  TEST_CASE("invalid scenarios are rejected before running") {
    Scenario s = shipped("3r_pd");
    s.dt = 0.02;
    CHECK_THROWS_AS(run(s), ConfigError);
    s = shipped("3r_pd");
    s.q0 = Vec::Zero(2);
    CHECK_THROWS_AS(run(s), ConfigError);
    s = shipped("3r_pd");
    s.settling.coordinate = 3;
    CHECK_THROWS_AS(run(s), ConfigError);
  }

  TEST_CASE("nominal run never touches the human") {
    Scenario s = shipped("3r_imp2");
    s.contact.enabled = true;
    s.t_max = 6.0;
    const TrajectoryLog log = run(s);
    CHECK_FALSE(contact_probe(log, s.plan.region, s.contact.human_radius).has_value());
  }

  TEST_CASE("a passive impact matches the two-body spring model") {
    for (double lambda : {1.0, 0.5}) {
      for (double v : {0.3, 0.6}) {
        const Scenario s = launched_at_human(lambda, v);
        const TrajectoryLog log = run(s);
        const double mu = reduced_mass(s.plan.region.effective_mass, log.steps[0].m_eff);
        const double expected = oracle::impact_peak(v, mu, s.plan.region.spring_n_per_m());
        const auto probe = contact_probe(log, s.plan.region, s.contact.human_radius);
        REQUIRE(probe.has_value());
        CHECK(*probe == doctest::Approx(expected).epsilon(0.01));
      }
    }
    // Halving the rendered mass lowers the peak.
    CHECK(peak_force(run(launched_at_human(0.5, 0.6))) <
          peak_force(run(launched_at_human(1.0, 0.6))));
  }

  TEST_CASE("the capped approach arrives at a speed the body region tolerates") {
    for (const char* name : {"3r_ctm", "3r_imp1", "3r_imp2"}) {
      const Scenario s = into_human(name);
      const TrajectoryLog log = run(s);
      const StepRecord* hit = first_contact(log);
      REQUIRE(hit != nullptr);
      const double mu = reduced_mass(s.plan.region.effective_mass, hit->m_eff);
      const double transient = simulate_impact_1d(std::max(hit->v_rel, 1e-9), mu,
                                                  s.plan.region.spring_n_per_m());
      CHECK(transient <= 1.01 * s.plan.region.max_force);
      CHECK(contact_probe(log, s.plan.region, s.contact.human_radius).has_value());
    }
  }

  TEST_CASE("without the cap the same approach exceeds the force limit") {
    for (const char* name : {"3r_ctm", "3r_imp2"}) {
      const Scenario capped = into_human(name);
      Scenario fast = capped;
      fast.plan.speed_override = 1.0;
      const double peak_fast = peak_force(run(fast));
      CHECK(peak_fast > capped.plan.region.max_force);
      CHECK(peak_fast > peak_force(run(capped)));
    }
  }
}
