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

#include <cmath>

#include "pflsim/errors.hpp"
#include "pflsim/robot_model.hpp"

namespace pflsim {

namespace {

// Absolute link angles q1, q1+q2, q1+q2+q3.
Eigen::Vector3d absolute_angles(const Vec& q) {
  return {q(0), q(0) + q(1), q(0) + q(1) + q(2)};
}

}  // namespace

PlanarThreeR::PlanarThreeR(std::string name, std::array<Link, 3> links,
                           Eigen::Vector2d gravity)
    : RobotModel(std::move(name)), links_(links), gravity_(std::move(gravity)) {
  for (const Link& l : links_) {
    if (!(l.length > 0.0) || !(l.mass > 0.0) || !(l.inertia > 0.0)) {
      throw ConfigError("planar 3R link parameters must be positive");
    }
    // Uniform rod: COM at mid-length, so the joint inertia must exceed m (l/2)^2.
    if (l.inertia <= l.mass * 0.25 * l.length * l.length) {
      throw ConfigError("planar 3R link inertia is below its mid-length parallel-axis term");
    }
  }
  const auto& [l1, l2, l3] = links_;
  const double r2 = 0.5 * l2.length;
  const double r3 = 0.5 * l3.length;
  a3_ = l3.inertia;
  a2_ = l2.inertia + l3.mass * l2.length * l2.length + a3_;
  a1_ = l1.inertia + (l2.mass + l3.mass) * l1.length * l1.length + a2_;
  b_ = l2.mass * l1.length * r2 + l3.mass * l1.length * l2.length;
  c_ = l3.mass * l2.length * r3;
  d_ = l3.mass * l1.length * r3;
}

PlanarThreeR PlanarThreeR::table_defaults(Eigen::Vector2d gravity) {
  auto rod = [](double length, double mass) {
    return Link{length, mass, mass * length * length / 3.0};
  };
  return PlanarThreeR("planar3r", {rod(2.0, 8.0), rod(2.0, 5.0), rod(2.0, 5.0)},
                      std::move(gravity));
}

Vec PlanarThreeR::forward_kinematics(const Vec& q) const {
  check_q(q);
  const Eigen::Vector3d a = absolute_angles(q);
  Vec r(3);
  r(0) = links_[0].length * std::cos(a(0)) + links_[1].length * std::cos(a(1)) +
         links_[2].length * std::cos(a(2));
  r(1) = links_[0].length * std::sin(a(0)) + links_[1].length * std::sin(a(1)) +
         links_[2].length * std::sin(a(2));
  r(2) = wrap_angle(a(2));
  return r;
}

Mat PlanarThreeR::jacobian(const Vec& q) const {
  check_q(q);
  const Eigen::Vector3d a = absolute_angles(q);
  Mat J = Mat::Zero(3, 3);
  for (int j = 0; j < 3; ++j) {
    for (int i = j; i < 3; ++i) {
      J(0, j) -= links_[i].length * std::sin(a(i));
      J(1, j) += links_[i].length * std::cos(a(i));
    }
    J(2, j) = 1.0;
  }
  return J;
}

Vec PlanarThreeR::jacobian_dot_qdot(const Vec& q, const Vec& qd) const {
  check_q(q);
  check_q(qd);
  const Eigen::Vector3d a = absolute_angles(q);
  const Eigen::Vector3d w = absolute_angles(qd);
  Vec out = Vec::Zero(3);
  for (int i = 0; i < 3; ++i) {
    out(0) -= links_[i].length * std::cos(a(i)) * w(i) * w(i);
    out(1) -= links_[i].length * std::sin(a(i)) * w(i) * w(i);
  }
  return out;
}

Mat PlanarThreeR::mass_matrix(const Vec& q) const {
  check_q(q);
  const double c2 = std::cos(q(1));
  const double c3 = std::cos(q(2));
  const double c23 = std::cos(q(1) + q(2));
  Mat M(3, 3);
  M(0, 0) = a1_ + 2.0 * b_ * c2 + 2.0 * c_ * c3 + 2.0 * d_ * c23;
  M(0, 1) = a2_ + b_ * c2 + 2.0 * c_ * c3 + d_ * c23;
  M(0, 2) = a3_ + c_ * c3 + d_ * c23;
  M(1, 1) = a2_ + 2.0 * c_ * c3;
  M(1, 2) = a3_ + c_ * c3;
  M(2, 2) = a3_;
  M(1, 0) = M(0, 1);
  M(2, 0) = M(0, 2);
  M(2, 1) = M(1, 2);
  return M;
}

std::array<Mat, 3> PlanarThreeR::mass_matrix_derivatives(const Vec& q) const {
  check_q(q);
  const double s2 = std::sin(q(1));
  const double s3 = std::sin(q(2));
  const double s23 = std::sin(q(1) + q(2));
  std::array<Mat, 3> dM{Mat::Zero(3, 3), Mat::Zero(3, 3), Mat::Zero(3, 3)};

  Mat& d2 = dM[1];
  d2(0, 0) = -2.0 * b_ * s2 - 2.0 * d_ * s23;
  d2(0, 1) = -b_ * s2 - d_ * s23;
  d2(0, 2) = -d_ * s23;

  Mat& d3 = dM[2];
  d3(0, 0) = -2.0 * c_ * s3 - 2.0 * d_ * s23;
  d3(0, 1) = -2.0 * c_ * s3 - d_ * s23;
  d3(0, 2) = -c_ * s3 - d_ * s23;
  d3(1, 1) = -2.0 * c_ * s3;
  d3(1, 2) = -c_ * s3;

  for (Mat& d : dM) {
    d(1, 0) = d(0, 1);
    d(2, 0) = d(0, 2);
    d(2, 1) = d(1, 2);
  }
  return dM;
}

Mat PlanarThreeR::coriolis_matrix(const Vec& q, const Vec& qd) const {
  check_q(qd);
  const auto dM = mass_matrix_derivatives(q);
  Mat C = Mat::Zero(3, 3);
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) {
        C(k, j) += 0.5 * (dM[i](k, j) + dM[j](k, i) - dM[k](i, j)) * qd(i);
      }
    }
  }
  return C;
}

Vec PlanarThreeR::coriolis(const Vec& q, const Vec& qd) const {
  return coriolis_matrix(q, qd) * qd;
}

Vec PlanarThreeR::gravity(const Vec& q) const {
  check_q(q);
  const Eigen::Vector3d a = absolute_angles(q);
  Vec G = Vec::Zero(3);
  // G = -sum_i m_i J_ci^T g, with J_ci the Jacobian of link i's midpoint.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j <= i; ++j) {
      Eigen::Vector2d dp = Eigen::Vector2d::Zero();
      for (int k = j; k <= i; ++k) {
        const double reach = k < i ? links_[k].length : 0.5 * links_[k].length;
        dp += reach * Eigen::Vector2d(-std::sin(a(k)), std::cos(a(k)));
      }
      G(j) -= links_[i].mass * dp.dot(gravity_);
    }
  }
  return G;
}

double PlanarThreeR::total_mass() const {
  return links_[0].mass + links_[1].mass + links_[2].mass;
}

DHChain planar_three_r_as_dh(const PlanarThreeR& arm) {
  const auto& links = arm.links();
  std::vector<DHRow> rows{{0.0, 0.0, 0.0, 0.0},
                          {links[0].length, 0.0, 0.0, 0.0},
                          {links[1].length, 0.0, 0.0, 0.0}};
  std::vector<LinkInertia> inertias;
  for (const auto& l : links) {
    const double r = 0.5 * l.length;
    const double about_com = l.inertia - l.mass * r * r;
    // Only the z moment acts in planar motion; x and y moments just keep the tensor SPD.
    inertias.push_back(LinkInertia{l.mass, Eigen::Vector3d(r, 0.0, 0.0),
                                   about_com * Eigen::Matrix3d::Identity()});
  }
  const Eigen::Vector3d g(arm.gravity_vector()(0), arm.gravity_vector()(1), 0.0);
  return DHChain(arm.name() + "_dh", std::move(rows), std::move(inertias),
                 DHRow{links[2].length, 0.0, 0.0, 0.0}, g);
}

}  // namespace pflsim
