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
#include <string>
#include <vector>

#include "json.hpp"

#include "pflsim/numerics.hpp"
#include "pflsim/simulator.hpp"

namespace pflsim {

/// True when `value` lies within (1 - fraction) * |goal| of `goal`.
bool within_settling_band(const SettlingCriterion& criterion, double value, double goal,
                          bool angular);

/// Band test for the criterion's coordinate, or for all of them at once.
bool pose_within_settling_band(const SettlingCriterion& criterion, const Vec& pose,
                               const Vec& goal, int translational_dim);

/// First time the criterion's coordinate enters its band and stays there for
/// the hold time. Empty if no in-band stretch lasts that long. For all
/// coordinates, the latest of the per-coordinate times.
std::optional<double> settling_time(const TrajectoryLog& log, const SettlingCriterion& criterion);

/// Mean |r - r_ref| per task coordinate, angles wrapped. The reference is the
/// planner setpoint of each step or the final goal.
Vec mean_abs_error(const TrajectoryLog& log, ErrorReference reference = ErrorReference::kSetpoint);

/// sum over steps and joints of |tau| dt, in N m s.
double control_effort(const TrajectoryLog& log);

struct RunMetrics {
  std::string label;
  std::optional<double> settling_time;
  Vec mean_abs_error;
  double control_effort = 0.0;
  double peak_v_rel = 0.0;
  int cap_violations = 0;
};

/// Steps whose speed toward the human exceeds (1 + tolerance) times the cap.
int count_cap_violations(const TrajectoryLog& log, double tolerance = 0.02);

RunMetrics compute_metrics(const std::string& label, const TrajectoryLog& log,
                           const SettlingCriterion& criterion, ErrorReference reference);

nlohmann::json to_json(const RunMetrics& m);

/// Rows of settling time and per-coordinate tracking error, in input order.
class ComparisonTable {
 public:
  explicit ComparisonTable(std::vector<RunMetrics> rows);

  const std::vector<RunMetrics>& rows() const { return rows_; }
  nlohmann::json to_json() const;
  std::string to_text() const;

 private:
  std::vector<RunMetrics> rows_;
};

/// Throws DimensionMismatch when the runs' task dimensions differ.
ComparisonTable comparison_table(std::vector<RunMetrics> runs);
ComparisonTable comparison_table(std::vector<RunMetrics> runs,
                                 const std::vector<std::string>& labels);

}  // namespace pflsim
