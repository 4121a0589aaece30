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

#include <fstream>

#include "json.hpp"

#include "pflsim/errors.hpp"
#include "pflsim/robot_model.hpp"

namespace pflsim {

using nlohmann::json;

Dynamics RobotModel::dynamics(const Vec& q, const Vec& qd) const {
  return Dynamics{mass_matrix(q), coriolis(q, qd), gravity(q)};
}

Vec RobotModel::task_velocity(const Vec& q, const Vec& qd) const {
  check_q(qd);
  return jacobian(q) * qd;
}

Vec RobotModel::task_error(const Vec& r, const Vec& r_d) const {
  if (r.size() != task_dim() || r_d.size() != task_dim()) {
    throw DimensionMismatch("task_error: pose dimension must be " +
                            std::to_string(task_dim()));
  }
  Vec e = r - r_d;
  for (int i = translational_dim(); i < task_dim(); ++i) e(i) = wrap_angle(e(i));
  return e;
}

void RobotModel::set_torque_limits(Vec limits, Vec rate_limits) {
  for (const Vec* v : {&limits, &rate_limits}) {
    if (v->size() != 0 && v->size() != dof()) {
      throw ConfigError("torque limit vectors need one entry per joint");
    }
    if (v->size() != 0 && !(v->array() > 0.0).all()) {
      throw ConfigError("torque limits must be positive");
    }
  }
  torque_limits_ = std::move(limits);
  torque_rate_limits_ = std::move(rate_limits);
}

void RobotModel::check_q(const Vec& q) const {
  if (q.size() != dof()) {
    throw DimensionMismatch("joint vector has " + std::to_string(q.size()) +
                            " entries, model " + name_ + " has " + std::to_string(dof()));
  }
}

namespace {

Vec optional_vector(const json& doc, const char* key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return {};
  const auto values = doc.at(key).get<std::vector<double>>();
  return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

DHRow parse_row(const json& j) {
  return DHRow{j.value("a", 0.0), j.value("alpha", 0.0), j.value("d", 0.0),
               j.value("theta_offset", 0.0)};
}

LinkInertia parse_link(const json& j) {
  LinkInertia link;
  link.mass = j.at("mass").get<double>();
  const auto com = j.at("com").get<std::vector<double>>();
  if (com.size() != 3) throw ConfigError("link com must have 3 entries");
  link.com = Eigen::Vector3d(com[0], com[1], com[2]);
  // Ixx, Iyy, Izz, Ixy, Iyz, Ixz
  const auto I = j.at("inertia").get<std::vector<double>>();
  if (I.size() != 6) throw ConfigError("link inertia must be [Ixx, Iyy, Izz, Ixy, Iyz, Ixz]");
  link.inertia << I[0], I[3], I[5],
                  I[3], I[1], I[4],
                  I[5], I[4], I[2];
  return link;
}

std::shared_ptr<RobotModel> parse_model(const json& doc) {
  const auto name = doc.at("name").get<std::string>();
  const auto convention = doc.at("convention").get<std::string>();
  const auto g = doc.value("gravity", std::vector<double>{});

  if (convention == "planar3r") {
    const auto& links = doc.at("links");
    if (!links.is_array() || links.size() != 3) {
      throw ConfigError("planar3r model needs exactly 3 links");
    }
    std::array<PlanarThreeR::Link, 3> parsed{};
    for (std::size_t i = 0; i < 3; ++i) {
      const double length = links[i].at("length").get<double>();
      const double mass = links[i].at("mass").get<double>();
      const double thin_rod = mass * length * length / 3.0;
      const double inertia = links[i].value("inertia", thin_rod);
      parsed[i] = PlanarThreeR::Link{length, mass, inertia};
    }
    Eigen::Vector2d gravity = Eigen::Vector2d::Zero();
    if (!g.empty()) {
      if (g.size() != 2) throw ConfigError("planar3r gravity must have 2 entries");
      gravity = Eigen::Vector2d(g[0], g[1]);
    }
    return std::make_shared<PlanarThreeR>(name, parsed, gravity);
  }

  if (convention == "mdh") {
    std::vector<DHRow> rows;
    std::vector<LinkInertia> links;
    for (const auto& j : doc.at("joints")) rows.push_back(parse_row(j));
    for (const auto& j : doc.at("links")) links.push_back(parse_link(j));
    const DHRow tool = doc.contains("tool") ? parse_row(doc.at("tool")) : DHRow{};
    Eigen::Vector3d gravity(0.0, 0.0, -9.81);
    if (!g.empty()) {
      if (g.size() != 3) throw ConfigError("mdh gravity must have 3 entries");
      gravity = Eigen::Vector3d(g[0], g[1], g[2]);
    }
    return std::make_shared<DHChain>(name, std::move(rows), std::move(links), tool, gravity);
  }

  throw ConfigError("unknown model convention '" + convention + "'");
}

}  // namespace

std::shared_ptr<const RobotModel> robot_model_from_json(const json& doc) {
  try {
    auto model = parse_model(doc);
    model->set_torque_limits(optional_vector(doc, "torque_limits"),
                             optional_vector(doc, "torque_rate_limits"));
    return model;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("robot model: ") + e.what());
  }
}

std::shared_ptr<const RobotModel> load_robot_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open robot model " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return robot_model_from_json(doc);
}

}  // namespace pflsim

namespace pflsim {

std::optional<Vec> inverse_kinematics(const RobotModel& model, const Vec& target,
                                      const Vec& seed, const IkOptions& options) {
  const int rows = options.position_only ? model.translational_dim() : model.task_dim();
  if (target.size() != rows && target.size() != model.task_dim()) {
    throw DimensionMismatch("inverse_kinematics: target has the wrong size");
  }
  Vec q = seed;
  const double damping2 = options.damping * options.damping;
  for (int it = 0; it < options.max_iterations; ++it) {
    const Vec r = model.forward_kinematics(q);
    Vec e(rows);
    if (options.position_only) {
      e = target.head(rows) - r.head(rows);
    } else {
      e = -model.task_error(r, target);
    }
    if (e.norm() < options.tolerance) {
      return q.unaryExpr([](double a) { return wrap_angle(a); }).eval();
    }
    const Mat J = model.jacobian(q).topRows(rows);
    const Mat A = J * J.transpose() + damping2 * Mat::Identity(rows, rows);
    q += J.transpose() * A.ldlt().solve(e);
    if (!q.allFinite()) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace pflsim
