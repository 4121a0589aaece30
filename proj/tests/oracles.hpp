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


// Reference computations used only by the tests. Each one is written from
// first principles and shares no code with the library it checks.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Moore-Penrose inverse from the SVD.
inline Mat svd_pinv(const Mat& A, double tol = 1e-12) {
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vec s = svd.singularValues();
  for (int i = 0; i < s.size(); ++i) s(i) = s(i) > tol * s(0) ? 1.0 / s(i) : 0.0;
  return svd.matrixV() * s.asDiagonal() * svd.matrixU().transpose();
}

inline double wrap(double a) {
  a = std::remainder(a, 2.0 * M_PI);
  return a <= -M_PI ? a + 2.0 * M_PI : a;
}

// Central-difference Jacobian of f; components listed in `angular` are
// differenced through wrap().
inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& q, double h,
                       int first_angular = 1 << 30) {
  const Vec f0 = f(q);
  Mat J(f0.size(), q.size());
  for (int j = 0; j < q.size(); ++j) {
    Vec qp = q, qm = q;
    qp(j) += h;
    qm(j) -= h;
    Vec d = f(qp) - f(qm);
    for (int i = first_angular; i < d.size(); ++i) d(i) = wrap(d(i));
    J.col(j) = d / (2.0 * h);
  }
  return J;
}

// Planar 3R of uniform rods, everything in explicit trig.
struct Rod {
  double length, mass, inertia_about_joint;
};

inline std::vector<Eigen::Vector2d> rod_coms(const std::vector<Rod>& rods, const Vec& q) {
  std::vector<Eigen::Vector2d> out;
  Eigen::Vector2d joint = Eigen::Vector2d::Zero();
  double angle = 0.0;
  for (std::size_t i = 0; i < rods.size(); ++i) {
    angle += q(i);
    const Eigen::Vector2d dir(std::cos(angle), std::sin(angle));
    out.push_back(joint + 0.5 * rods[i].length * dir);
    joint += rods[i].length * dir;
  }
  return out;
}

inline Vec rod_tip_pose(const std::vector<Rod>& rods, const Vec& q) {
  double x = 0, y = 0, angle = 0;
  for (std::size_t i = 0; i < rods.size(); ++i) {
    angle += q(i);
    x += rods[i].length * std::cos(angle);
    y += rods[i].length * std::sin(angle);
  }
  Vec r(3);
  r << x, y, wrap(angle);
  return r;
}

// Kinetic energy with COM velocities taken by finite differences of COM
// positions along qd.
inline double rod_kinetic_energy(const std::vector<Rod>& rods, const Vec& q, const Vec& qd) {
  const double h = 1e-6;
  const auto plus = rod_coms(rods, q + h * qd);
  const auto minus = rod_coms(rods, q - h * qd);
  double T = 0.0, omega = 0.0;
  for (std::size_t i = 0; i < rods.size(); ++i) {
    omega += qd(i);
    const Eigen::Vector2d v = (plus[i] - minus[i]) / (2.0 * h);
    const double l = rods[i].length, m = rods[i].mass;
    const double I_com = rods[i].inertia_about_joint - m * 0.25 * l * l;
    T += 0.5 * m * v.squaredNorm() + 0.5 * I_com * omega * omega;
  }
  return T;
}

// T is quadratic in qd, so M follows exactly from polarisation.
inline Mat mass_from_energy(const std::function<double(const Vec&)>& T, int n) {
  Mat M(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec ei = Vec::Unit(n, i), ej = Vec::Unit(n, j);
      M(i, j) = i == j ? 2.0 * T(ei) : T(ei + ej) - T(ei) - T(ej);
    }
  }
  return M;
}

// Modified DH link transform written out element by element.
inline Eigen::Matrix4d craig(double a, double alpha, double d, double theta) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  Eigen::Matrix4d T;
  T << ct, -st, 0, a,
       st * ca, ct * ca, -sa, -sa * d,
       st * sa, ct * sa, ca, ca * d,
       0, 0, 0, 1;
  return T;
}

struct DH {
  double a, alpha, d;
};

// Frames 1..n and the flange, as 4x4 matrices.
inline std::vector<Eigen::Matrix4d> dh_frames(const std::vector<DH>& rows, const DH& tool,
                                              const Vec& q) {
  std::vector<Eigen::Matrix4d> out;
  Eigen::Matrix4d T = Eigen::Matrix4d::Identity();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    T = T * craig(rows[i].a, rows[i].alpha, rows[i].d, q(i));
    out.push_back(T);
  }
  out.push_back(T * craig(tool.a, tool.alpha, tool.d, 0.0));
  return out;
}

inline std::vector<DH> panda_rows() {
  return {{0, 0, 0.333},      {0, -M_PI / 2, 0},      {0, M_PI / 2, 0.316}, {0.0825, M_PI / 2, 0},
          {-0.0825, -M_PI / 2, 0.384}, {0, M_PI / 2, 0}, {0.088, M_PI / 2, 0}};
}
inline DH panda_tool() { return {0, 0, 0.107}; }

// Extrinsic x-y-z angles, R = Rz(c) Ry(b) Rx(a), from elementary rotations.
inline Eigen::Matrix3d rpy(double a, double b, double c) {
  return (Eigen::AngleAxisd(c, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(b, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(a, Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

// e'' + b e' + c e = 0 with e(0) = e0, e'(0) = v0.
inline double linear_ode(double b, double c, double e0, double v0, double t) {
  const double disc = b * b - 4.0 * c;
  if (std::abs(disc) < 1e-12 * b * b) {
    const double r = -0.5 * b;
    return (e0 + (v0 - r * e0) * t) * std::exp(r * t);
  }
  if (disc > 0) {
    const double s = std::sqrt(disc);
    const double r1 = 0.5 * (-b + s), r2 = 0.5 * (-b - s);
    const double c2 = (v0 - r1 * e0) / (r2 - r1);
    const double c1 = e0 - c2;
    return c1 * std::exp(r1 * t) + c2 * std::exp(r2 * t);
  }
  const double w = 0.5 * std::sqrt(-disc), r = -0.5 * b;
  return std::exp(r * t) * (e0 * std::cos(w * t) + (v0 - r * e0) / w * std::sin(w * t));
}

// Peak spring force of a mass hitting a linear spring: energy balance.
inline double impact_peak(double v, double mu, double k) { return v * std::sqrt(mu * k); }

inline Mat random_spd(std::mt19937& rng, int n, double min_eig = 0.1) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = g(rng);
  return A * A.transpose() + min_eig * Mat::Identity(n, n);
}

inline Vec random_q(std::mt19937& rng, int n, double span = M_PI) {
  std::uniform_real_distribution<double> u(-span, span);
  Vec q(n);
  for (int i = 0; i < n; ++i) q(i) = u(rng);
  return q;
}

}  // namespace oracle
