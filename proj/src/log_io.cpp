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

#include "pflsim/log_io.hpp"

#include <cstdio>
#include <fstream>

#include "pflsim/errors.hpp"

namespace pflsim {

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  out << buf;
}

}  // namespace

std::string trajectory_csv_header(const TrajectoryLog& log) {
  std::string h = "t";
  for (int i = 1; i <= log.dof; ++i) h += ",q" + std::to_string(i);
  for (int i = 1; i <= log.dof; ++i) h += ",qd" + std::to_string(i);
  h += log.translational_dim == 2 ? ",x,y" : ",x,y,z";
  h += log.task_dim == 3 ? ",theta" : ",alpha,beta,gamma";
  h += ",v_rel,v_cap";
  for (int i = 1; i <= log.dof; ++i) h += ",tau" + std::to_string(i);
  h += ",m_eff,event";
  return h;
}

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out) {
  out << trajectory_csv_header(log) << '\n';
  for (const StepRecord& s : log.steps) {
    put(out, s.t);
    for (const Vec* v : {&s.q, &s.qd, &s.pose}) {
      for (Eigen::Index i = 0; i < v->size(); ++i) {
        out << ',';
        put(out, (*v)(i));
      }
    }
    out << ',';
    put(out, s.v_rel);
    out << ',';
    put(out, s.v_cap);
    for (Eigen::Index i = 0; i < s.tau.size(); ++i) {
      out << ',';
      put(out, s.tau(i));
    }
    out << ',';
    put(out, s.m_eff);
    out << ',' << s.event << '\n';
  }
}

void write_trajectory_csv(const TrajectoryLog& log, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_trajectory_csv(log, out);
}

}  // namespace pflsim
