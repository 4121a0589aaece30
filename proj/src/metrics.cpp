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

#include "pflsim/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

#include "pflsim/errors.hpp"

namespace pflsim {

bool within_settling_band(const SettlingCriterion& criterion, double value, double goal,
                          bool angular) {
  const double diff = angular ? wrap_angle(goal - value) : goal - value;
  return std::abs(diff) <= (1.0 - criterion.fraction) * std::abs(goal);
}

bool pose_within_settling_band(const SettlingCriterion& criterion, const Vec& pose,
                               const Vec& goal, int translational_dim) {
  const int c = criterion.coordinate;
  if (c == SettlingCriterion::kAllCoordinates) {
    for (int i = 0; i < pose.size(); ++i) {
      if (!within_settling_band(criterion, pose(i), goal(i), i >= translational_dim)) return false;
    }
    return true;
  }
  if (c < 0 || c >= pose.size()) throw DimensionMismatch("settling coordinate out of range");
  return within_settling_band(criterion, pose(c), goal(c), c >= translational_dim);
}

std::optional<double> settling_time(const TrajectoryLog& log, const SettlingCriterion& criterion) {
  if (log.steps.empty()) throw EmptyLog("settling_time: empty log");
  const int c = criterion.coordinate;
  if (c == SettlingCriterion::kAllCoordinates) {
    double latest = 0.0;
    for (int i = 0; i < log.task_dim; ++i) {
      SettlingCriterion single = criterion;
      single.coordinate = i;
      const auto t = settling_time(log, single);
      if (!t) return std::nullopt;
      latest = std::max(latest, *t);
    }
    return latest;
  }
  if (c < 0 || c >= log.task_dim) throw DimensionMismatch("settling coordinate out of range");

  std::optional<std::size_t> start;
  for (std::size_t k = 0; k < log.steps.size(); ++k) {
    if (!pose_within_settling_band(criterion, log.steps[k].pose, log.goal,
                                   log.translational_dim)) {
      start.reset();
      continue;
    }
    if (!start) start = k;
    if (log.steps[k].t - log.steps[*start].t >= criterion.hold - 1e-12) {
      return log.steps[*start].t;
    }
  }
  return std::nullopt;
}

Vec mean_abs_error(const TrajectoryLog& log, ErrorReference reference) {
  if (log.steps.empty()) throw EmptyLog("mean_abs_error: empty log");
  Vec sum = Vec::Zero(log.task_dim);
  for (const StepRecord& s : log.steps) {
    const Vec& target = reference == ErrorReference::kGoal ? log.goal : s.pose_d;
    Vec e = s.pose - target;
    for (int i = log.translational_dim; i < log.task_dim; ++i) e(i) = wrap_angle(e(i));
    sum += e.cwiseAbs();
  }
  return sum / static_cast<double>(log.steps.size());
}

double control_effort(const TrajectoryLog& log) {
  if (log.steps.empty()) throw EmptyLog("control_effort: empty log");
  double total = 0.0;
  for (const StepRecord& s : log.steps) total += s.tau.cwiseAbs().sum() * log.dt;
  return total;
}

int count_cap_violations(const TrajectoryLog& log, double tolerance) {
  int count = 0;
  for (const StepRecord& s : log.steps) {
    if (s.v_rel > (1.0 + tolerance) * s.v_cap) ++count;
  }
  return count;
}

RunMetrics compute_metrics(const std::string& label, const TrajectoryLog& log,
                           const SettlingCriterion& criterion, ErrorReference reference) {
  RunMetrics m;
  m.label = label;
  m.settling_time = settling_time(log, criterion);
  m.mean_abs_error = mean_abs_error(log, reference);
  m.control_effort = control_effort(log);
  for (const StepRecord& s : log.steps) m.peak_v_rel = std::max(m.peak_v_rel, s.v_rel);
  m.cap_violations = count_cap_violations(log);
  return m;
}

nlohmann::json to_json(const RunMetrics& m) {
  nlohmann::json j;
  j["label"] = m.label;
  j["settling_time_s"] = m.settling_time ? nlohmann::json(*m.settling_time) : nlohmann::json();
  j["mean_abs_error"] = std::vector<double>(m.mean_abs_error.data(),
                                            m.mean_abs_error.data() + m.mean_abs_error.size());
  j["control_effort_Nms"] = m.control_effort;
  j["peak_v_rel"] = m.peak_v_rel;
  j["cap_violations"] = m.cap_violations;
  return j;
}

ComparisonTable::ComparisonTable(std::vector<RunMetrics> rows) : rows_(std::move(rows)) {}

nlohmann::json ComparisonTable::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows_) out.push_back(pflsim::to_json(r));
  return out;
}

std::string ComparisonTable::to_text() const {
  const auto dims = rows_.front().mean_abs_error.size();
  const std::vector<std::string> planar{"e_x", "e_y", "e_theta"};
  const std::vector<std::string> spatial{"e_x", "e_y", "e_z", "e_alpha", "e_beta", "e_gamma"};
  const auto& names = dims == 3 ? planar : spatial;

  char buf[64];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-10s %10s", "controller", "settle_s");
  out += buf;
  for (Eigen::Index i = 0; i < dims; ++i) {
    std::snprintf(buf, sizeof buf, " %9s", i < static_cast<Eigen::Index>(names.size())
                                               ? names[i].c_str() : "e");
    out += buf;
  }
  std::snprintf(buf, sizeof buf, " %12s\n", "effort_Nms");
  out += buf;
  for (const auto& r : rows_) {
    std::snprintf(buf, sizeof buf, "%-10s ", r.label.c_str());
    out += buf;
    if (r.settling_time) {
      std::snprintf(buf, sizeof buf, "%10.4f", *r.settling_time);
    } else {
      std::snprintf(buf, sizeof buf, "%10s", "-");
    }
    out += buf;
    for (Eigen::Index i = 0; i < dims; ++i) {
      std::snprintf(buf, sizeof buf, " %9.4f", r.mean_abs_error(i));
      out += buf;
    }
    std::snprintf(buf, sizeof buf, " %12.1f\n", r.control_effort);
    out += buf;
  }
  return out;
}

ComparisonTable comparison_table(std::vector<RunMetrics> runs) {
  if (runs.empty()) throw EmptyLog("comparison_table: no runs");
  for (const auto& r : runs) {
    if (r.mean_abs_error.size() != runs.front().mean_abs_error.size()) {
      throw DimensionMismatch("comparison_table: runs have different task dimensions");
    }
  }
  return ComparisonTable(std::move(runs));
}

ComparisonTable comparison_table(std::vector<RunMetrics> runs,
                                 const std::vector<std::string>& labels) {
  if (labels.size() != runs.size()) {
    throw DimensionMismatch("comparison_table: one label per run required");
  }
  for (std::size_t i = 0; i < runs.size(); ++i) runs[i].label = labels[i];
  return comparison_table(std::move(runs));
}

}  // namespace pflsim
