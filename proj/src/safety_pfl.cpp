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

#include "pflsim/safety_pfl.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>

#include "json.hpp"

#include "pflsim/errors.hpp"

namespace pflsim {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

constexpr double kMobilityEpsilon = 1e-12;

}  // namespace

const std::vector<BodyRegion>& body_model() {
  static const std::vector<BodyRegion> table{
      {"skull and forehead", 130.0, 150.0, 4.4},
      {"face", 65.0, 75.0, 4.4},
      {"neck", 150.0, 50.0, 1.2},
      {"back and shoulders", 210.0, 35.0, 40.0},
      {"chest", 140.0, 25.0, 40.0},
      {"abdomen", 110.0, 10.0, 40.0},
      {"pelvis", 180.0, 25.0, 40.0},
      {"upper arms and elbow joints", 150.0, 30.0, 3.0},
      {"lower arms and wrist joints", 160.0, 40.0, 2.0},
      {"hands and fingers", 140.0, 75.0, 0.6},
      {"thighs and knees", 220.0, 50.0, 75.0},
      {"lower legs", 130.0, 60.0, 75.0},
  };
  return table;
}

BodyRegion body_region(std::string_view name) {
  const std::string key = lowercase(name);
  for (const auto& region : body_model()) {
    if (region.name == key) return region;
  }
  throw UnknownRegion("unknown body region '" + std::string(name) + "'");
}

std::vector<BodyRegion> load_body_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open body model " + path.string());
  std::vector<BodyRegion> rows;
  try {
    const auto doc = nlohmann::json::parse(in);
    for (const auto& r : doc.at("regions")) {
      rows.push_back(BodyRegion{lowercase(r.at("name").get<std::string>()),
                                r.at("max_force_N").get<double>(),
                                r.at("spring_constant_N_per_mm").get<double>(),
                                r.at("effective_mass_kg").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  if (rows != body_model()) {
    throw ConfigError(path.string() + " does not match the ISO/TS 15066 body table");
  }
  return rows;
}

std::string to_string(const EffectiveMassMethod& method) {
  struct Visitor {
    std::string operator()(const IsoConservative&) const { return "iso"; }
    std::string operator()(const OperationalSpace&) const { return "operational"; }
    std::string operator()(const Reduced&) const { return "reduced"; }
  };
  return std::visit(Visitor{}, method);
}

double reduced_mass(double human_mass, double robot_mass) {
  if (!(human_mass > 0.0) || !(robot_mass > 0.0)) {
    throw NonPositiveMass("reduced_mass: masses must be positive");
  }
  return 1.0 / (1.0 / human_mass + 1.0 / robot_mass);
}

double v_rel_max(const BodyRegion& region, double robot_mass) {
  const double mu = reduced_mass(region.effective_mass, robot_mass);
  return region.max_force / std::sqrt(mu * region.spring_n_per_m());
}

double effective_mass(const EffectiveMassMethod& method, const RobotModel& model,
                      const Vec& q, const Vec& u) {
  if (u.size() != model.translational_dim()) {
    throw DimensionMismatch("effective_mass: direction must have " +
                            std::to_string(model.translational_dim()) + " components");
  }
  if (std::abs(u.norm() - 1.0) > 1e-9) {
    throw DimensionMismatch("effective_mass: direction must be a unit vector");
  }

  auto operational = [&] {
    const Mat Jv = model.jacobian(q).topRows(model.translational_dim());
    const Mat M = model.mass_matrix(q);
    const Vec mobility_dir = Jv.transpose() * u;
    const double mobility = mobility_dir.dot(M.llt().solve(mobility_dir));
    if (!(mobility > kMobilityEpsilon)) {
      throw SingularInertia("effective_mass: direction is structurally immobile");
    }
    return 1.0 / mobility;
  };

  struct Visitor {
    const RobotModel& model;
    decltype(operational)& os;
    double operator()(const IsoConservative& m) const {
      if (m.payload < 0.0) throw NonPositiveMass("payload must be non-negative");
      return 0.5 * model.total_mass() + m.payload;
    }
    double operator()(const OperationalSpace&) const { return os(); }
    double operator()(const Reduced& m) const {
      if (!(m.lambda > 0.0) || !(m.lambda <= 1.0)) {
        throw ConfigError("reduction factor lambda must lie in (0, 1]");
      }
      return m.lambda * os();
    }
  };
  return std::visit(Visitor{model, operational}, method);
}

double simulate_impact_1d(double v, double mu, double k) {
  if (!(v > 0.0) || !(mu > 0.0) || !(k > 0.0)) {
    throw NonPositiveMass("simulate_impact_1d: speed, mass and stiffness must be positive");
  }
  // State: compression x and its rate. Runs until the spring unloads.
  const double period = 2.0 * std::numbers::pi * std::sqrt(mu / k);
  const double dt = period / 4000.0;
  Vec state(2);
  state << 0.0, v;
  const Derivative deriv = [&](const Vec& s) {
    Vec d(2);
    d << s(1), -k * std::max(s(0), 0.0) / mu;
    return d;
  };
  double peak = 0.0;
  for (int i = 0; i < 8000; ++i) {
    state = rk4_step(state, deriv, dt);
    peak = std::max(peak, k * state(0));
    if (state(0) < 0.0) break;
  }
  return peak;
}

}  // namespace pflsim
