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


#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "pflsim/errors.hpp"
#include "pflsim/log_io.hpp"
#include "pflsim/metrics.hpp"
#include "pflsim/safety_pfl.hpp"
#include "pflsim/scenario.hpp"
#include "pflsim/simulator.hpp"

namespace pflsim::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SuiteRun {
  const char* label;
  const char* file_suffix;
};

constexpr SuiteRun kSuiteRuns[] = {
    {"PD", "pd"}, {"CTM", "ctm"}, {"IMP1", "imp1"}, {"IMP2", "imp2"}};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Everything a run leaves on disk, except the timestamp, is a pure function
// of the scenario.
RunMetrics run_and_write(const std::string& label, const Scenario& scenario,
                         const fs::path& out_dir) {
  const TrajectoryLog log = run(scenario);
  const RunMetrics m = compute_metrics(label, log, scenario.settling, scenario.error_reference);
  fs::create_directories(out_dir);
  write_trajectory_csv(log, out_dir / "trajectory.csv");
  write_text(out_dir / "metrics.json", to_json(m).dump(2) + "\n");
  json meta = {{"tool", "pflsim"},
               {"created_utc", utc_timestamp()},
               {"steps", log.steps.size()},
               {"scenario", to_json(scenario)}};
  write_text(out_dir / "meta.json", meta.dump(2) + "\n");
  return m;
}

std::string describe(const RunMetrics& m) {
  std::ostringstream os;
  os << m.label << ": settling ";
  if (m.settling_time) {
    os << std::setprecision(4) << *m.settling_time << " s";
  } else {
    os << "n/a";
  }
  os << ", effort " << std::setprecision(6) << m.control_effort << " N m s";
  return os.str();
}

EffectiveMassMethod parse_method(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto number = [&](double fallback) {
    if (arg.empty()) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(arg, &used);
      if (used == arg.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("bad number in method '" + text + "'");
  };
  if (kind == "iso") return IsoConservative{number(0.0)};
  if (kind == "operational" && arg.empty()) return OperationalSpace{};
  if (kind == "reduced") {
    if (arg.empty()) throw ConfigError("reduced method needs a lambda, e.g. reduced:0.5");
    const double lambda = number(1.0);
    if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in (0, 1]");
    return Reduced{lambda};
  }
  throw ConfigError("unknown method '" + text + "' (iso[:payload], operational, reduced:lambda)");
}

struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
  double at(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

std::vector<Axis> parse_grid(const std::string& spec) {
  if (spec.empty()) throw ConfigError("empty grid");
  std::vector<Axis> axes;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    Axis a;
    char c1 = 0, c2 = 0;
    std::istringstream is(part);
    if (!(is >> a.lo >> c1 >> a.hi >> c2 >> a.n) || c1 != ':' || c2 != ':' || !is.eof()) {
      throw ConfigError("bad grid axis '" + part + "' (expected lo:hi:n)");
    }
    if (a.n < 1) throw ConfigError("grid axis '" + part + "' has no points");
    axes.push_back(a);
  }
  if (axes.empty()) throw ConfigError("empty grid");
  return axes;
}

}  // namespace

int cmd_run(const fs::path& scenario_file, const fs::path& out_dir,
            const std::map<std::string, std::string>& overrides, std::ostream& out,
            std::ostream& err) {
  Scenario scenario;
  try {
    scenario = load_scenario(scenario_file);
    apply_overrides(scenario, overrides);
    scenario.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  try {
    const RunMetrics m = run_and_write(scenario.name, scenario, out_dir);
    out << describe(m) << "\n";
  } catch (const SimulationError& e) {
    err << "simulation failed: " << e.what() << "\n";
    return kSimulationFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}

std::vector<std::string> available_suites() { return {"3r", "panda"}; }

int cmd_suite(const std::string& name, const fs::path& out_dir, std::ostream& out,
              std::ostream& err) {
  const auto suites = available_suites();
  if (std::find(suites.begin(), suites.end(), name) == suites.end()) {
    err << "error: unknown suite '" << name << "'; available:";
    for (const auto& s : suites) err << " " << s;
    err << "\n";
    return kUsage;
  }
  std::vector<Scenario> scenarios;
  try {
    for (const auto& r : kSuiteRuns) {
      scenarios.push_back(
          load_scenario(data_dir() / "scenarios" / (name + "_" + r.file_suffix + ".json")));
      scenarios.back().validate();
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  // Runs share nothing but read-only models.
  std::vector<std::future<RunMetrics>> jobs;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      return run_and_write(kSuiteRuns[i].label, scenarios[i], out_dir / kSuiteRuns[i].label);
    }));
  }
  std::vector<RunMetrics> rows;
  int status = kOk;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      rows.push_back(jobs[i].get());
      out << describe(rows.back()) << "\n";
    } catch (const SimulationError& e) {
      err << kSuiteRuns[i].label << " failed: " << e.what() << "\n";
      status = kSimulationFailure;
    } catch (const Error& e) {
      err << kSuiteRuns[i].label << ": " << e.what() << "\n";
      if (status == kOk) status = kUsage;
    }
  }
  if (status != kOk) return status;

  const ComparisonTable table = comparison_table(std::move(rows));
  write_text(out_dir / "comparison.json", table.to_json().dump(2) + "\n");
  write_text(out_dir / "comparison.txt", table.to_text());
  out << table.to_text();
  return kOk;
}

int cmd_limits(const fs::path& model_file, const std::string& region_name,
               const std::string& method_text, const std::string& grid,
               const std::vector<double>& direction, std::ostream& out, std::ostream& err) {
  try {
    const auto model = load_robot_model(model_file);
    const BodyRegion region = body_region(region_name);
    const EffectiveMassMethod method = parse_method(method_text);
    const auto axes = parse_grid(grid);
    const int dim = model->translational_dim();
    if (static_cast<int>(axes.size()) != dim) {
      throw ConfigError("grid needs " + std::to_string(dim) + " axes for model " +
                        model->name());
    }
    Vec u = Vec::Zero(dim);
    if (direction.empty()) {
      u(0) = 1.0;
    } else {
      if (static_cast<int>(direction.size()) != dim) {
        throw ConfigError("direction needs " + std::to_string(dim) + " components");
      }
      u = Eigen::Map<const Vec>(direction.data(), dim);
      if (u.norm() < 1e-12) throw ConfigError("direction must be nonzero");
      u.normalize();
    }

    std::vector<int> idx(dim, 0);
    std::size_t total = 1;
    for (const auto& a : axes) total *= static_cast<std::size_t>(a.n);

    const char* names[] = {"x", "y", "z"};
    for (int k = 0; k < dim; ++k) out << names[k] << ",";
    out << "reachable,m_eff,v_rel_max\n";

    // Walk the grid row by row and seed each solve with the previous one.
    Vec seed = Vec::Constant(model->dof(), 0.3);
    char buf[64];
    for (std::size_t n = 0; n < total; ++n) {
      Vec p(dim);
      for (int k = 0; k < dim; ++k) p(k) = axes[k].at(idx[k]);
      const auto q = inverse_kinematics(*model, p, seed, {.position_only = true});
      for (int k = 0; k < dim; ++k) {
        std::snprintf(buf, sizeof buf, "%.10g,", p(k));
        out << buf;
      }
      if (q) {
        seed = *q;
        const double m = effective_mass(method, *model, *q, u);
        std::snprintf(buf, sizeof buf, "1,%.10g,%.10g\n", m, v_rel_max(region, m));
        out << buf;
      } else if (std::holds_alternative<IsoConservative>(method)) {
        const double m = effective_mass(method, *model, seed, u);
        std::snprintf(buf, sizeof buf, "0,%.10g,%.10g\n", m, v_rel_max(region, m));
        out << buf;
      } else {
        out << "0,nan,nan\n";
      }
      for (int k = dim - 1; k >= 0; --k) {
        if (++idx[k] < axes[k].n) break;
        idx[k] = 0;
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Speed-limited physical human-robot interaction simulator"};
  app.require_subcommand(1);

  std::string scenario_file;
  std::string out_dir = "out";
  std::vector<std::string> override_args;
  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario");
  run_cmd->add_option("scenario", scenario_file, "Scenario JSON file")->required();
  run_cmd->add_option("-o,--out", out_dir, "Output directory");
  run_cmd->add_option("--override", override_args, "key=value (lambda, kp, kd, dt, t_max, region)");

  std::string suite_name;
  auto* suite_cmd = app.add_subcommand("suite", "Run the four-controller comparison");
  suite_cmd->add_option("name", suite_name, "3r or panda")->required();
  suite_cmd->add_option("-o,--out", out_dir, "Output directory");

  std::string model_file, region, method = "operational", grid;
  std::vector<double> direction;
  auto* limits_cmd = app.add_subcommand("limits", "Speed limits over a workspace grid");
  limits_cmd->add_option("model", model_file, "Robot model JSON file")->required();
  limits_cmd->add_option("--region", region, "Body region")->required();
  limits_cmd->add_option("--method", method, "iso[:payload], operational or reduced:lambda");
  limits_cmd->add_option("--grid", grid, "X0:X1:N,Y0:Y1:N[,Z0:Z1:N]")->required();
  limits_cmd->add_option("--direction", direction, "Contact direction (default +x)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  if (run_cmd->parsed()) {
    std::map<std::string, std::string> overrides;
    for (const auto& kv : override_args) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) {
        err << "error: override '" << kv << "' is not key=value\n";
        return kUsage;
      }
      overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return cmd_run(scenario_file, out_dir, overrides, out, err);
  }
  if (suite_cmd->parsed()) return cmd_suite(suite_name, out_dir, out, err);
  return cmd_limits(model_file, region, method, grid, direction, out, err);
}

}  // namespace pflsim::cli
