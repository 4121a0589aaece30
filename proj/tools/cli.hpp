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
#include <ostream>
#include <string>
#include <vector>

namespace pflsim::cli {

enum ExitCode : int { kOk = 0, kSimulationFailure = 1, kUsage = 2 };

/// Runs one scenario and writes trajectory.csv, metrics.json and meta.json
/// into `out_dir`.
int cmd_run(const std::filesystem::path& scenario_file, const std::filesystem::path& out_dir,
            const std::map<std::string, std::string>& overrides, std::ostream& out,
            std::ostream& err);

/// Suites available to cmd_suite, in display order.
std::vector<std::string> available_suites();

/// Runs PD, CTM, IMP1 and IMP2 for the named suite and writes one directory
/// per run plus comparison.json and comparison.txt.
int cmd_suite(const std::string& name, const std::filesystem::path& out_dir, std::ostream& out,
              std::ostream& err);

/// Effective mass and speed limit over a grid of end-effector positions.
/// `method` is "iso[:payload]", "operational" or "reduced:lambda"; `grid` is
/// "X0:X1:N,Y0:Y1:N[,Z0:Z1:N]". Writes CSV to `out`.
int cmd_limits(const std::filesystem::path& model_file, const std::string& region,
               const std::string& method, const std::string& grid,
               const std::vector<double>& direction, std::ostream& out, std::ostream& err);

/// Full command line, dispatching to the commands above.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pflsim::cli
