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

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pflsim/numerics.hpp"
#include "pflsim/robot_model.hpp"

namespace pflsim {

/// One region of the ISO/TS 15066 body model. The spring constant is kept in
/// N/mm as tabulated.
struct BodyRegion {
  std::string name;
  double max_force = 0.0;       ///< N
  double spring_n_per_mm = 0.0;  ///< N/mm
  double effective_mass = 0.0;  ///< kg

  double spring_n_per_m() const { return spring_n_per_mm * 1000.0; }
  bool operator==(const BodyRegion&) const = default;
};

/// The twelve tabulated body regions, in table order.
const std::vector<BodyRegion>& body_model();

/// Looks up a region by name (case-insensitive). Throws UnknownRegion.
BodyRegion body_region(std::string_view name);

/// Reads a body-model JSON file and checks every row against the built-in table.
std::vector<BodyRegion> load_body_model(const std::filesystem::path& path);

/// Half the moving mass plus the payload; independent of configuration.
struct IsoConservative {
  double payload = 0.0;
};
/// (u^T J_v M^-1 J_v^T u)^-1 along the contact direction.
struct OperationalSpace {};
/// lambda times the operational-space value.
struct Reduced {
  double lambda = 1.0;
};
using EffectiveMassMethod = std::variant<IsoConservative, OperationalSpace, Reduced>;

std::string to_string(const EffectiveMassMethod& method);

/// (1/m_H + 1/m_R)^-1. Throws NonPositiveMass.
double reduced_mass(double human_mass, double robot_mass);

/// Largest relative speed at which a transient contact stays under the
/// region's force limit: F_max / sqrt(mu k).
double v_rel_max(const BodyRegion& region, double robot_mass);

/// Robot effective mass along the unit translational direction `u`
/// (length = model.translational_dim()).
double effective_mass(const EffectiveMassMethod& method, const RobotModel& model,
                      const Vec& q, const Vec& u);

/// Peak force when a point mass `mu` at speed `v` compresses a linear spring `k`.
double simulate_impact_1d(double v, double mu, double k);

}  // namespace pflsim
