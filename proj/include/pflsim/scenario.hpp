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
#include <map>
#include <string>

#include "json.hpp"

#include "pflsim/simulator.hpp"

namespace pflsim {

/// Root holding models/, data/ and scenarios/. PFLSIM_DATA_DIR wins over the
/// source tree the library was built from.
std::filesystem::path data_dir();

/// Step used when a scenario does not set "dt": PFLSIM_DT if set, else 1e-3 s.
double default_dt();

/// Builds a Scenario from its JSON document. Relative model paths resolve
/// against `base_dir`.
Scenario scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);

Scenario load_scenario(const std::filesystem::path& path);

/// Applies `key=value` overrides: lambda, kp, kd, dt, t_max, region.
/// Unknown keys or unparsable values throw ConfigError.
void apply_overrides(Scenario& scenario, const std::map<std::string, std::string>& overrides);

/// Echo of the scenario for run metadata.
nlohmann::json to_json(const Scenario& scenario);

}  // namespace pflsim
