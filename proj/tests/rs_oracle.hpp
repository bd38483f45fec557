/*
 * Copyright 2026 The harvest_nav Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Brute-force shortest-path reference for car-like paths with cusps.
//
// Every candidate word is first-arc * middle(u) * last-arc. The first arc is a
// rotation of the plane about the start circle center C1, so the center of
// the last circle, carried through middle(u), stays at a fixed distance
// rho(u) from C1 no matter how long the first arc is. A word therefore
// reaches the goal iff rho(u) equals |C_goal - C1|. That scalar equation is
// solved per word (closed form when the middle contains a straight piece,
// grid scan + bisection otherwise); the first and last arc lengths follow
// from angles. The word set is a superset of the classical 48 words.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "harvest_nav/geometry.hpp"

namespace harvest::oracle {

struct RsSeg {
  int curv = 0;  // 0 straight, +1 left, -1 right (unit radius)
  int dir = 1;   // +1 forward, -1 reverse
  double len = 0.0;
};

inline Eigen::Vector3d rs_step(const Eigen::Vector3d& p, const RsSeg& s) {
  const double ds = s.dir * s.len;
  if (s.curv == 0) return {p.x() + ds * std::cos(p.z()), p.y() + ds * std::sin(p.z()), p.z()};
  const Eigen::Vector2d c = p.head<2>() + s.curv * Eigen::Vector2d(-std::sin(p.z()), std::cos(p.z()));
  const double th = s.curv * ds;
  const Eigen::Vector2d r = Eigen::Rotation2Dd(th) * (p.head<2>() - c) + c;
  return {r.x(), r.y(), p.z() + th};
}

inline Eigen::Vector3d rs_run(const std::vector<RsSeg>& segs) {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  for (const auto& s : segs) p = rs_step(p, s);
  return p;
}

struct RsOracleResult {
  double length = std::numeric_limits<double>::infinity();  // unit radius
  std::vector<RsSeg> segments;
};

class RsOracle {
 public:
  RsOracle() {
    const double h = std::numbers::pi / 2.0;
    for (int k1 : {1, -1})
      for (int kn : {1, -1}) {
        // Middle templates; len < 0 marks the free parameter u.
        const std::vector<std::vector<RsSeg>> templates = {
            {{0, 1, -1}},
            {{-k1, 1, -1}},
            {{-k1, 1, -1}, {k1, 1, -1}},
            {{-k1, 1, h}, {0, 1, -1}},
            {{0, 1, -1}, {-kn, 1, h}},
            {{-k1, 1, h}, {0, 1, -1}, {-kn, 1, h}},
        };
        for (const auto& tmpl : templates) {
          const int n = static_cast<int>(tmpl.size());
          for (int mask = 0; mask < (1 << n); ++mask) {
            Group g;
            g.k1 = k1;
            g.kn = kn;
            g.middle = tmpl;
            for (int i = 0; i < n; ++i) g.middle[i].dir = (mask >> i & 1) ? -1 : 1;
            g.linear = std::any_of(tmpl.begin(), tmpl.end(), [](const RsSeg& s) { return s.curv == 0; });
            if (g.linear) {
              g.q0 = q_of(g, 0.0);
              g.e = q_of(g, 1.0) - g.q0;
            } else {
              g.table.resize(kSamples + 1);
              for (int i = 0; i <= kSamples; ++i) g.table[i] = rho(g, u_at(i));
            }
            groups_.push_back(std::move(g));
          }
        }
      }
  }

  /// Shortest path from the origin (heading 0) to goal (x, y, phi), unit radius.
  RsOracleResult solve(double gx, double gy, double phi) const {
    RsOracleResult best;
    const double umax = std::hypot(gx, gy) + 4.0 * std::numbers::pi + 2.0;
    for (const auto& g : groups_) {
      const Eigen::Vector2d c1(0.0, g.k1);
      const Eigen::Vector2d cg(gx - g.kn * std::sin(phi), gy + g.kn * std::cos(phi));
      const double d = (cg - c1).norm();
      for (double u : roots(g, c1, d, umax)) {
        const Eigen::Vector2d q = q_of(g, u);
        const double theta = std::atan2(cg.y() - c1.y(), cg.x() - c1.x()) -
                             std::atan2(q.y() - c1.y(), q.x() - c1.x());
        for (int d1 : {1, -1})
          for (int dn : {1, -1}) {
            std::vector<RsSeg> segs;
            segs.push_back({g.k1, d1, wrap_positive(theta * d1 * g.k1)});
            for (auto s : g.middle) {
              if (s.len < 0) s.len = u;
              segs.push_back(s);
            }
            const Eigen::Vector3d mid = rs_run(segs);
            segs.push_back({g.kn, dn, wrap_positive((phi - mid.z()) * dn * g.kn)});
            const Eigen::Vector3d end = rs_run(segs);
            if (std::hypot(end.x() - gx, end.y() - gy) > 1e-8 ||
                std::abs(normalize_angle(end.z() - phi)) > 1e-8)
              continue;
            double len = 0.0;
            for (const auto& s : segs) len += s.len;
            if (len < best.length) {
              best.length = len;
              best.segments = segs;
            }
          }
      }
    }
    return best;
  }

  /// Metric length between two poses for the given radius.
  double distance(const Pose2d& a, const Pose2d& b, double radius) const {
    const Eigen::Vector2d d = a.rotation().transpose() * (b.translation() - a.translation()) / radius;
    if (d.norm() < 1e-12 && std::abs(normalize_angle(b.yaw() - a.yaw())) < 1e-12) return 0.0;
    return radius * solve(d.x(), d.y(), normalize_angle(b.yaw() - a.yaw())).length;
  }

 private:
  static constexpr int kSamples = 4096;
  static constexpr double kUMaxArc = 2.0 * std::numbers::pi;

  struct Group {
    int k1 = 1, kn = 1;
    std::vector<RsSeg> middle;
    bool linear = false;
    Eigen::Vector2d q0, e;
    std::vector<double> table;
  };

  static double u_at(int i) { return kUMaxArc * i / kSamples; }

  static double wrap_positive(double a) {
    double v = std::fmod(a, 2.0 * std::numbers::pi);
    if (v < 0) v += 2.0 * std::numbers::pi;
    if (v > 2.0 * std::numbers::pi - 1e-12) v = 0.0;
    return v;
  }

  // Center of the last circle after the middle, in the start frame.
  static Eigen::Vector2d q_of(const Group& g, double u) {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    for (auto s : g.middle) {
      if (s.len < 0) s.len = u;
      p = rs_step(p, s);
    }
    return p.head<2>() + g.kn * Eigen::Vector2d(-std::sin(p.z()), std::cos(p.z()));
  }

  static double rho(const Group& g, double u) {
    return (q_of(g, u) - Eigen::Vector2d(0.0, g.k1)).norm();
  }

  std::vector<double> roots(const Group& g, const Eigen::Vector2d& c1, double d, double umax) const {
    std::vector<double> out;
    if (g.linear) {
      // |q0 + u e - c1|^2 = d^2
      const Eigen::Vector2d w = g.q0 - c1;
      const double a = g.e.squaredNorm(), b = 2.0 * w.dot(g.e), c = w.squaredNorm() - d * d;
      double disc = b * b - 4.0 * a * c;
      if (disc < 0.0 && disc > -1e-10) disc = 0.0;
      if (disc < 0.0) return out;
      for (double s : {-1.0, 1.0}) {
        const double u = (-b + s * std::sqrt(disc)) / (2.0 * a);
        if (u >= -1e-12 && u <= umax) out.push_back(std::max(0.0, u));
      }
      return out;
    }
    auto f = [&](double u) { return rho(g, u) - d; };
    for (int i = 0; i < kSamples; ++i) {
      const double fa = g.table[i] - d, fb = g.table[i + 1] - d;
      if (fa == 0.0) out.push_back(u_at(i));
      if ((fa < 0.0) != (fb < 0.0) && fb != 0.0) {
        double lo = u_at(i), hi = u_at(i + 1);
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
          const double mid = 0.5 * (lo + hi);
          ((f(mid) < 0.0) == (fa < 0.0) ? lo : hi) = mid;
        }
        out.push_back(0.5 * (lo + hi));
      }
      // Near-tangent roots: local minimum of |f| that may not change sign.
      if (i > 0) {
        const double fm = std::abs(g.table[i - 1] - d), f0 = std::abs(fa), fp = std::abs(fb);
        if (f0 <= fm && f0 <= fp && f0 < 1e-3) {
          double lo = u_at(i - 1), hi = u_at(i + 1);
          const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
          for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
            (std::abs(f(x1)) < std::abs(f(x2)) ? hi : lo) = (std::abs(f(x1)) < std::abs(f(x2)) ? x2 : x1);
          }
          const double u = 0.5 * (lo + hi);
          if (std::abs(f(u)) < 1e-9) out.push_back(u);
        }
      }
    }
    return out;
  }

  std::vector<Group> groups_;
};

}  // namespace harvest::oracle
