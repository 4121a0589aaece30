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

#include "pflsim/scenario.hpp"

#include <cstdlib>
#include <fstream>

#include "json.hpp"

#include "pflsim/errors.hpp"

namespace pflsim {

using nlohmann::json;

namespace {

Vec to_vec(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

// Scalar -> multiple of identity, flat list -> diagonal, nested list -> full matrix.
Mat parse_gain(const json& j, int dim) {
  if (j.is_number()) return j.get<double>() * Mat::Identity(dim, dim);
  if (!j.is_array() || j.empty()) throw ConfigError("gain must be a number or an array");
  if (!j.front().is_array()) {
    const Vec d = to_vec(j);
    if (d.size() != dim) throw ConfigError("diagonal gain must have " + std::to_string(dim) +
                                           " entries");
    return d.asDiagonal();
  }
  Mat m(dim, dim);
  if (static_cast<int>(j.size()) != dim) throw ConfigError("gain matrix has the wrong size");
  for (int r = 0; r < dim; ++r) {
    const Vec row = to_vec(j[r]);
    if (row.size() != dim) throw ConfigError("gain matrix has the wrong size");
    m.row(r) = row.transpose();
  }
  return m;
}

EffectiveMassMethod parse_mass_method(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "iso") return IsoConservative{j.value("payload", 0.0)};
  if (type == "operational") return OperationalSpace{};
  if (type == "reduced") return Reduced{j.at("lambda").get<double>()};
  throw ConfigError("unknown mass method '" + type + "'");
}

json mass_method_json(const EffectiveMassMethod& method) {
  struct Visitor {
    json operator()(const IsoConservative& m) const {
      return {{"type", "iso"}, {"payload", m.payload}};
    }
    json operator()(const OperationalSpace&) const { return {{"type", "operational"}}; }
    json operator()(const Reduced& m) const { return {{"type", "reduced"}, {"lambda", m.lambda}}; }
  };
  return std::visit(Visitor{}, method);
}

double parse_number(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("override " + key + ": '" + value + "' is not a number");
  }
}

}  // namespace

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("PFLSIM_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return PFLSIM_SOURCE_DATA_DIR;
}

double default_dt() {
  if (const char* env = std::getenv("PFLSIM_DT"); env != nullptr && *env != '\0') {
    return parse_number("PFLSIM_DT", env);
  }
  return 1e-3;
}

Scenario scenario_from_json(const json& doc, const std::filesystem::path& base_dir) {
  try {
    Scenario s;
    s.name = doc.value("name", std::string("scenario"));
    std::filesystem::path model_path = doc.at("model").get<std::string>();
    if (model_path.is_relative()) model_path = base_dir / model_path;
    s.model = load_robot_model(model_path);
    const int task = s.model->task_dim();

    const json& c = doc.at("controller");
    s.controller.type = controller_type_from_string(c.at("type").get<std::string>());
    s.controller.gains.kp = parse_gain(c.at("Kp"), task);
    s.controller.gains.kd = parse_gain(c.at("Kd"), task);
    s.controller.lambda = c.value("lambda", 1.0);
    s.controller.force_feedback = c.value("force_feedback", true);
    if (c.contains("null_space")) {
      const json& ns = c.at("null_space");
      s.controller.null_task.damping = ns.value("damping", 0.0);
      s.controller.null_task.stiffness = ns.value("stiffness", 0.0);
      if (ns.contains("posture")) s.controller.null_task.posture = to_vec(ns.at("posture"));
    }

    const json& h = doc.at("human");
    s.plan.human = to_vec(h.at("position"));
    s.plan.region = body_region(h.at("region").get<std::string>());
    s.plan.mass_method = doc.contains("mass_method") ? parse_mass_method(doc.at("mass_method"))
                                                     : EffectiveMassMethod{OperationalSpace{}};
    s.plan.goal = to_vec(doc.at("goal"));
    if (doc.contains("planner")) {
      const json& p = doc.at("planner");
      s.plan.v_floor = p.value("v_floor", s.plan.v_floor);
      s.plan.goal_tolerance = p.value("goal_tolerance", s.plan.goal_tolerance);
      if (p.contains("speed_override") && !p.at("speed_override").is_null()) {
        s.plan.speed_override = p.at("speed_override").get<double>();
      }
    }

    if (doc.contains("q0")) {
      s.q0 = to_vec(doc.at("q0"));
    } else {
      // Redundant arms: the seed picks the IK branch.
      const json& st = doc.at("start");
      const Vec pose = to_vec(st.at("pose"));
      const Vec seed = st.contains("seed") ? to_vec(st.at("seed"))
                                           : Vec::Zero(s.model->dof());
      if (pose.size() != task || seed.size() != s.model->dof()) {
        throw ConfigError("start pose or seed has the wrong size");
      }
      const auto q = inverse_kinematics(*s.model, pose, seed);
      if (!q) throw ConfigError("start pose is not reachable from the given seed");
      s.q0 = *q;
    }
    if (doc.contains("qd0")) s.qd0 = to_vec(doc.at("qd0"));
    s.dt = doc.contains("dt") ? doc.at("dt").get<double>() : default_dt();
    s.t_max = doc.at("t_max").get<double>();
    if (doc.contains("settling")) {
      const json& st = doc.at("settling");
      if (st.contains("coordinate") && st.at("coordinate").is_string()) {
        if (st.at("coordinate").get<std::string>() != "all") {
          throw ConfigError("settling coordinate must be an index or \"all\"");
        }
        s.settling.coordinate = SettlingCriterion::kAllCoordinates;
      } else {
        s.settling.coordinate = st.value("coordinate", 0);
      }
      s.settling.fraction = st.value("fraction", 0.95);
      s.settling.hold = st.value("hold", 0.2);
    }
    s.stop_on_settle = doc.value("stop_on_settle", false);
    if (doc.contains("contact")) {
      s.contact.enabled = doc.at("contact").value("enabled", false);
      s.contact.human_radius = doc.at("contact").value("human_radius", 0.1);
    }
    if (doc.contains("metrics")) {
      const auto ref = doc.at("metrics").value("error_reference", std::string("setpoint"));
      if (ref == "goal") {
        s.error_reference = ErrorReference::kGoal;
      } else if (ref != "setpoint") {
        throw ConfigError("error_reference must be 'setpoint' or 'goal'");
      }
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return scenario_from_json(doc, path.parent_path());
}

void apply_overrides(Scenario& s, const std::map<std::string, std::string>& overrides) {
  const int task = s.model->task_dim();
  for (const auto& [key, value] : overrides) {
    if (key == "lambda") {
      const double lambda = parse_number(key, value);
      s.controller.lambda = lambda;
      if (std::holds_alternative<Reduced>(s.plan.mass_method)) s.plan.mass_method = Reduced{lambda};
    } else if (key == "kp") {
      s.controller.gains.kp = parse_number(key, value) * Mat::Identity(task, task);
    } else if (key == "kd") {
      s.controller.gains.kd = parse_number(key, value) * Mat::Identity(task, task);
    } else if (key == "dt") {
      s.dt = parse_number(key, value);
    } else if (key == "t_max") {
      s.t_max = parse_number(key, value);
    } else if (key == "region") {
      s.plan.region = body_region(value);
    } else {
      throw ConfigError("unknown override '" + key +
                        "' (expected lambda, kp, kd, dt, t_max or region)");
    }
  }
  s.validate();
}

json to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["model"] = s.model->name();
  j["controller"] = {{"type", to_string(s.controller.type)},
                     {"lambda", s.controller.lambda},
                     {"force_feedback", s.controller.force_feedback},
                     {"null_space",
                      {{"damping", s.controller.null_task.damping},
                       {"stiffness", s.controller.null_task.stiffness},
                       {"posture", to_std(s.controller.null_task.posture)}}}};
  json kp = json::array(), kd = json::array();
  for (Eigen::Index r = 0; r < s.controller.gains.kp.rows(); ++r) {
    kp.push_back(to_std(s.controller.gains.kp.row(r).transpose()));
    kd.push_back(to_std(s.controller.gains.kd.row(r).transpose()));
  }
  j["controller"]["Kp"] = kp;
  j["controller"]["Kd"] = kd;
  j["human"] = {{"position", to_std(s.plan.human)}, {"region", s.plan.region.name}};
  j["mass_method"] = mass_method_json(s.plan.mass_method);
  j["goal"] = to_std(s.plan.goal);
  j["planner"] = {{"v_floor", s.plan.v_floor}, {"goal_tolerance", s.plan.goal_tolerance}};
  if (s.plan.speed_override) j["planner"]["speed_override"] = *s.plan.speed_override;
  j["q0"] = to_std(s.q0);
  j["dt"] = s.dt;
  j["t_max"] = s.t_max;
  j["settling"] = {{"coordinate", s.settling.coordinate == SettlingCriterion::kAllCoordinates
                                      ? json("all")
                                      : json(s.settling.coordinate)},
                   {"fraction", s.settling.fraction},
                   {"hold", s.settling.hold}};
  j["stop_on_settle"] = s.stop_on_settle;
  j["contact"] = {{"enabled", s.contact.enabled}, {"human_radius", s.contact.human_radius}};
  j["metrics"] = {{"error_reference",
                   s.error_reference == ErrorReference::kGoal ? "goal" : "setpoint"}};
  return j;
}

}  // namespace pflsim
