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
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pflsim/errors.hpp"
#include "pflsim/robot_model.hpp"
#include "pflsim/safety_pfl.hpp"
#include "pflsim/scenario.hpp"

using namespace pflsim;

namespace {

struct Row {
  const char* name;
  double force, spring, mass;
};

// Transcribed by hand from the ISO/TS 15066 body model table.
const Row kTable[] = {
    {"skull and forehead", 130, 150, 4.4},
    {"face", 65, 75, 4.4},
    {"neck", 150, 50, 1.2},
    {"back and shoulders", 210, 35, 40},
    {"chest", 140, 25, 40},
    {"abdomen", 110, 10, 40},
    {"pelvis", 180, 25, 40},
    {"upper arms and elbow joints", 150, 30, 3},
    {"lower arms and wrist joints", 160, 40, 2},
    {"hands and fingers", 140, 75, 0.6},
    {"thighs and knees", 220, 50, 75},
    {"lower legs", 130, 60, 75},
};

Vec unit2(double angle) { return Eigen::Vector2d(std::cos(angle), std::sin(angle)); }

}  // namespace

TEST_SUITE("safety_pfl") {
  TEST_CASE("body model matches the ISO/TS 15066 table") {
    REQUIRE(body_model().size() == 12);
    for (const Row& row : kTable) {
      const BodyRegion r = body_region(row.name);
      CHECK(r.max_force == row.force);
      CHECK(r.spring_n_per_mm == row.spring);
      CHECK(r.effective_mass == row.mass);
    }
    CHECK(body_region("face").spring_n_per_m() == 75000.0);
  }

  TEST_CASE("region lookup is case-insensitive and rejects unknown names") {
    CHECK(body_region("Abdomen") == body_region("abdomen"));
    CHECK_THROWS_AS(body_region("tail"), UnknownRegion);
  }

  TEST_CASE("shipped body file round-trips") {
    const auto regions = load_body_model(data_dir() / "data" / "iso_ts_15066_body.json");
    CHECK(regions == body_model());
    CHECK_THROWS_AS(load_body_model("/nonexistent.json"), ConfigError);
  }

  TEST_CASE("reduced mass") {
    CHECK(reduced_mass(40, 40) == doctest::Approx(20.0));
    CHECK(reduced_mass(40, 9) == doctest::Approx(360.0 / 49.0).epsilon(1e-14));
    CHECK(reduced_mass(40, 1e12) == doctest::Approx(40.0).epsilon(1e-10));
    CHECK_THROWS_AS(reduced_mass(0, 4), NonPositiveMass);
    CHECK_THROWS_AS(reduced_mass(4, -1), NonPositiveMass);
  }

  TEST_CASE("maximum relative speed") {
    CHECK(v_rel_max(body_region("face"), 4.4) ==
          doctest::Approx(65.0 / std::sqrt(2.2 * 75000.0)).epsilon(1e-14));
    CHECK(v_rel_max(body_region("face"), 4.4) == doctest::Approx(0.1600).epsilon(1e-3));
    CHECK(v_rel_max(body_region("abdomen"), 9) == doctest::Approx(0.4058).epsilon(1e-3));
    BodyRegion doubled = body_region("chest");
    doubled.max_force *= 2.0;
    CHECK(v_rel_max(doubled, 5.0) == doctest::Approx(2.0 * v_rel_max(body_region("chest"), 5.0)));
    CHECK_THROWS_AS(v_rel_max(body_region("chest"), 0.0), NonPositiveMass);
  }

  TEST_CASE("maximum relative speed decreases with robot mass") {
    for (const BodyRegion& r : body_model()) {
      double prev = INFINITY;
      for (double m = 0.1; m <= 100.0; m *= 1.1) {
        const double v = v_rel_max(r, m);
        CHECK(v < prev);
        prev = v;
      }
    }
  }

  TEST_CASE("conservative mass is half the moving mass plus payload") {
    const auto arm = PlanarThreeR::table_defaults();
    const Vec q = Eigen::Vector3d(0.3, 0.2, -0.5);
    CHECK(effective_mass(IsoConservative{}, arm, q, unit2(0.4)) == doctest::Approx(9.0));
    CHECK(effective_mass(IsoConservative{2.0}, arm, q, unit2(1.0)) == doctest::Approx(11.0));
    CHECK_THROWS_AS(effective_mass(IsoConservative{-1.0}, arm, q, unit2(0.0)), NonPositiveMass);
  }

  TEST_CASE("operational-space mass follows the translational mobility") {
    const auto arm = PlanarThreeR::table_defaults();
    std::mt19937 rng(21);
    for (int k = 0; k < 100; ++k) {
      const Vec q = oracle::random_q(rng, 3);
      if (std::abs(std::sin(q(1))) < 0.1) continue;
      const Vec u = unit2(q(2) * 2.0);
      const Mat Jv = arm.jacobian(q).topRows(2);
      const Mat mob = Jv * arm.mass_matrix(q).inverse() * Jv.transpose();
      const double m = effective_mass(OperationalSpace{}, arm, q, u);
      CHECK(m == doctest::Approx(1.0 / u.dot(mob * u)).epsilon(1e-10));
      CHECK(effective_mass(OperationalSpace{}, arm, q, -u) == doctest::Approx(m).epsilon(1e-12));
      // Bounded by the largest eigenvalue of the translational task inertia.
      const double bound =
          Eigen::SelfAdjointEigenSolver<Mat>(mob.inverse()).eigenvalues().maxCoeff();
      CHECK(m <= bound * (1.0 + 1e-10));
      const double reduced = effective_mass(Reduced{0.5}, arm, q, u);
      CHECK(std::abs(reduced - 0.5 * m) / (0.5 * m) < 1e-12);
    }
  }

  TEST_CASE("unit direction is required") {
    const auto arm = PlanarThreeR::table_defaults();
    const Vec q = Eigen::Vector3d(0.3, 0.2, -0.5);
    CHECK_THROWS_AS(effective_mass(OperationalSpace{}, arm, q, Eigen::Vector2d(1, 1)),
                    DimensionMismatch);
    CHECK_THROWS_AS(effective_mass(OperationalSpace{}, arm, q, Eigen::Vector3d(1, 0, 0)),
                    DimensionMismatch);
    CHECK_THROWS_AS(effective_mass(Reduced{0.0}, arm, q, unit2(0.0)), ConfigError);
  }

  TEST_CASE("impact oracle") {
    CHECK(simulate_impact_1d(1, 1, 1) == doctest::Approx(1.0).epsilon(1e-3));
    const double f = simulate_impact_1d(0.3, 2.0, 5000.0);
    CHECK(simulate_impact_1d(0.6, 2.0, 5000.0) == doctest::Approx(2.0 * f).epsilon(1e-3));
    CHECK(f == doctest::Approx(oracle::impact_peak(0.3, 2.0, 5000.0)).epsilon(1e-3));
    CHECK_THROWS_AS(simulate_impact_1d(0.0, 1, 1), NonPositiveMass);
  }

  TEST_CASE("impact at the permitted speed stays under the force limit") {
    for (const BodyRegion& r : body_model()) {
      for (double m : {0.1, 0.5, 2.0, 9.0, 40.0, 100.0}) {
        const double v = v_rel_max(r, m);
        const double peak = simulate_impact_1d(v, reduced_mass(r.effective_mass, m),
                                               r.spring_n_per_m());
        CHECK(peak <= 1.01 * r.max_force);
        CHECK(peak >= 0.99 * r.max_force);
      }
    }
  }

  TEST_CASE("method names") {
    CHECK(to_string(EffectiveMassMethod{OperationalSpace{}}) == "operational");
    CHECK(to_string(EffectiveMassMethod{Reduced{0.5}}).find("reduced") == 0);
    CHECK(to_string(EffectiveMassMethod{IsoConservative{}}).find("iso") == 0);
  }
}
