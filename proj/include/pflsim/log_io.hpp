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
#include <ostream>
#include <string>

#include "pflsim/simulator.hpp"

namespace pflsim {

/// `t,q1..qn,qd1..qdn,x,y[,z],<angles>,v_rel,v_cap,tau1..taun,m_eff,event`
std::string trajectory_csv_header(const TrajectoryLog& log);

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out);
void write_trajectory_csv(const TrajectoryLog& log, const std::filesystem::path& path);

}  // namespace pflsim
