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

#include "harvest_nav/reeds_shepp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace harvest {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * kPi;
constexpr double kZero = 10.0 * std::numeric_limits<double>::epsilon();
constexpr double kEndTolerance = 1e-7;

using T = RsSegmentType;
constexpr T L = T::kLeft;
constexpr T R = T::kRight;
constexpr T S = T::kStraight;

// Wraps into [-pi, pi].
double mod2pi(double x) {
  double v = std::fmod(x, 2.0 * kPi);
  if (v < -kPi)
    v += 2.0 * kPi;
  else if (v > kPi)
    v -= 2.0 * kPi;
  return v;
}

void polar(double x, double y, double& r, double& theta) {
  r = std::hypot(x, y);
  theta = std::atan2(y, x);
}

void tau_omega(double u, double v, double xi, double eta, double phi, double& tau, double& omega) {
  const double delta = mod2pi(u - v);
  const double a = std::sin(u) - std::sin(delta);
  const double b = std::cos(u) - std::cos(delta) - 1.0;
  const double t1 = std::atan2(eta * a - xi * b, xi * a + eta * b);
  const double t2 = 2.0 * (std::cos(delta) - std::cos(v) - std::cos(u)) + 3.0;
  tau = t2 < 0 ? mod2pi(t1 + kPi) : mod2pi(t1);
  omega = mod2pi(tau - u + v - phi);
}

// Base words, all in the canonical "left first, forward first" form.

bool lp_sp_lp(double x, double y, double phi, double& t, double& u, double& v) {
  polar(x - std::sin(phi), y - 1.0 + std::cos(phi), u, t);
  if (t >= -kZero) {
    v = mod2pi(phi - t);
    return v >= -kZero;
  }
  return false;
}

bool lp_sp_rp(double x, double y, double phi, double& t, double& u, double& v) {
  double t1, u1;
  polar(x + std::sin(phi), y - 1.0 - std::cos(phi), u1, t1);
  u1 = u1 * u1;
  if (u1 < 4.0) return false;
  u = std::sqrt(u1 - 4.0);
  t = mod2pi(t1 + std::atan2(2.0, u));
  v = mod2pi(t - phi);
  return t >= -kZero && v >= -kZero;
}

bool lp_rm_l(double x, double y, double phi, double& t, double& u, double& v) {
  double u1, theta;
  polar(x - std::sin(phi), y - 1.0 + std::cos(phi), u1, theta);
  if (u1 > 4.0) return false;
  u = -2.0 * std::asin(0.25 * u1);
  t = mod2pi(theta + 0.5 * u + kPi);
  v = mod2pi(phi - t + u);
  return t >= -kZero && u <= kZero;
}

bool lp_rup_lum_rm(double x, double y, double phi, double& t, double& u, double& v) {
  const double xi = x + std::sin(phi), eta = y - 1.0 - std::cos(phi);
  const double rho = 0.25 * (2.0 + std::hypot(xi, eta));
  if (rho > 1.0) return false;
  u = std::acos(rho);
  tau_omega(u, -u, xi, eta, phi, t, v);
  return t >= -kZero && v <= kZero;
}

bool lp_rum_lum_rp(double x, double y, double phi, double& t, double& u, double& v) {
  const double xi = x + std::sin(phi), eta = y - 1.0 - std::cos(phi);
  const double rho = (20.0 - xi * xi - eta * eta) / 16.0;
  if (rho < 0.0 || rho > 1.0) return false;
  u = -std::acos(rho);
  if (u < -kHalfPi) return false;
  tau_omega(u, u, xi, eta, phi, t, v);
  return t >= -kZero && v >= -kZero;
}

bool lp_rm_sm_lm(double x, double y, double phi, double& t, double& u, double& v) {
  double rho, theta;
  polar(x - std::sin(phi), y - 1.0 + std::cos(phi), rho, theta);
  if (rho < 2.0) return false;
  const double r = std::sqrt(rho * rho - 4.0);
  u = 2.0 - r;
  t = mod2pi(theta + std::atan2(r, -2.0));
  v = mod2pi(phi - kHalfPi - t);
  return t >= -kZero && u <= kZero && v <= kZero;
}

bool lp_rm_sm_rm(double x, double y, double phi, double& t, double& u, double& v) {
  const double xi = x + std::sin(phi), eta = y - 1.0 - std::cos(phi);
  double rho, theta;
  polar(-eta, xi, rho, theta);
  if (rho < 2.0) return false;
  t = theta;
  u = 2.0 - rho;
  v = mod2pi(t + kHalfPi - phi);
  return t >= -kZero && u <= kZero && v <= kZero;
}

bool lp_rm_slm_rp(double x, double y, double phi, double& t, double& u, double& v) {
  const double xi = x + std::sin(phi), eta = y - 1.0 - std::cos(phi);
  double rho, theta;
  polar(xi, eta, rho, theta);
  if (rho < 2.0) return false;
  u = 4.0 - std::sqrt(rho * rho - 4.0);
  if (u > kZero) return false;
  t = mod2pi(std::atan2((4.0 - u) * xi - 2.0 * eta, -2.0 * xi + (u - 4.0) * eta));
  v = mod2pi(t - phi);
  return t >= -kZero && v >= -kZero;
}

T flip(T t) { return t == L ? R : t == R ? L : S; }

double segment_sum(const std::vector<RsSegment>& s) {
  double total = 0.0;
  for (const auto& seg : s) total += std::abs(seg.length);
  return total;
}

Pose2d integrate_unit(const std::vector<RsSegment>& segs) {
  Pose2d p;
  for (const auto& s : segs) p = advance_unit(p, s.type, s.length);
  return p;
}

struct Search {
  double x, y, phi;
  std::vector<RsSegment> best;
  double best_len = std::numeric_limits<double>::infinity();

  void offer(std::vector<RsSegment> segs) {
    const double len = segment_sum(segs);
    if (!(len < best_len)) return;
    const Pose2d end = integrate_unit(segs);
    if (std::hypot(end.x() - x, end.y() - y) > kEndTolerance ||
        std::abs(normalize_angle(end.yaw() - phi)) > kEndTolerance)
      return;
    best = std::move(segs);
    best_len = len;
  }

  // Tries a base word under the timeflip / reflect symmetries. `make` turns
  // (t, u, v) into segments for the canonical orientation.
  template <typename Solver, typename Make>
  void symmetric(Solver solve, double qx, double qy, double qphi, Make make) {
    double t, u, v;
    if (solve(qx, qy, qphi, t, u, v)) offer(make(t, u, v, false, false));
    if (solve(-qx, qy, -qphi, t, u, v)) offer(make(t, u, v, true, false));
    if (solve(qx, -qy, -qphi, t, u, v)) offer(make(t, u, v, false, true));
    if (solve(-qx, -qy, qphi, t, u, v)) offer(make(t, u, v, true, true));
  }
};

// Builds segments from types and signed lengths, applying timeflip (negate
// lengths) and reflection (swap L/R).
std::vector<RsSegment> word(std::initializer_list<T> types, std::initializer_list<double> lens,
                            bool timeflip, bool reflect) {
  std::vector<RsSegment> out;
  auto it = lens.begin();
  for (T ty : types) {
    out.push_back({reflect ? flip(ty) : ty, timeflip ? -*it : *it});
    ++it;
  }
  return out;
}

std::vector<RsSegment> solve_unit(double x, double y, double phi) {
  Search s{x, y, phi, {}};
  const double xb = x * std::cos(phi) + y * std::sin(phi);
  const double yb = x * std::sin(phi) - y * std::cos(phi);

  // CSC
  s.symmetric(lp_sp_lp, x, y, phi, [](double t, double u, double v, bool f, bool r) {
    return word({L, S, L}, {t, u, v}, f, r);
  });
  s.symmetric(lp_sp_rp, x, y, phi, [](double t, double u, double v, bool f, bool r) {
    return word({L, S, R}, {t, u, v}, f, r);
  });
  // CCC, forwards and backwards
  s.symmetric(lp_rm_l, x, y, phi, [](double t, double u, double v, bool f, bool r) {
    return word({L, R, L}, {t, u, v}, f, r);
  });
  s.symmetric(lp_rm_l, xb, yb, phi, [](double t, double u, double v, bool f, bool r) {
    return word({L, R, L}, {v, u, t}, f, r);
  });
  // CCCC
  s.symmetric(lp_rup_lum_rm, x, y, phi, [](double t, double u, double v, bool f, bool r) {
    return word({L, R, L, R}, {t, u, -u, v}, f, r);
  });
  s.symmetric(lp_rum_lum_rp, x, y, phi, [](double t, double u, double v, bool f, bool r) {
    return word({L, R, L, R}, {t, u, u, v}, f, r);
  });
  // CCSC and its reverse CSCC
  s.symmetric(lp_rm_sm_lm, x, y, phi, [](double t, double u, double v, bool f, bool r) {
    return word({L, R, S, L}, {t, -kHalfPi, u, v}, f, r);
  });
  s.symmetric(lp_rm_sm_rm, x, y, phi, [](double t, double u, double v, bool f, bool r) {
    return word({L, R, S, R}, {t, -kHalfPi, u, v}, f, r);
  });
  s.symmetric(lp_rm_sm_lm, xb, yb, phi, [](double t, double u, double v, bool f, bool r) {
    return word({L, S, R, L}, {v, u, -kHalfPi, t}, f, r);
  });
  s.symmetric(lp_rm_sm_rm, xb, yb, phi, [](double t, double u, double v, bool f, bool r) {
    return word({R, S, R, L}, {v, u, -kHalfPi, t}, f, r);
  });
  // CCSCC
  s.symmetric(lp_rm_slm_rp, x, y, phi, [](double t, double u, double v, bool f, bool r) {
    return word({L, R, S, L, R}, {t, -kHalfPi, u, -kHalfPi, v}, f, r);
  });
  return s.best;
}

}  // namespace

Pose2d advance_unit(const Pose2d& p, RsSegmentType type, double v) {
  const double phi = p.yaw();
  switch (type) {
    case T::kLeft:
      return {p.x() + std::sin(phi + v) - std::sin(phi), p.y() - std::cos(phi + v) + std::cos(phi),
              normalize_angle(phi + v)};
    case T::kRight:
      return {p.x() - std::sin(phi - v) + std::sin(phi), p.y() + std::cos(phi - v) - std::cos(phi),
              normalize_angle(phi - v)};
    case T::kStraight:
      return {p.x() + v * std::cos(phi), p.y() + v * std::sin(phi), phi};
  }
  return p;
}

double ReedsSheppPath::length() const { return radius * segment_sum(segments); }

int ReedsSheppPath::cusp_count() const {
  int cusps = 0, last = 0;
  for (const auto& s : segments) {
    if (s.length == 0.0) continue;
    const int sign = s.length > 0 ? 1 : -1;
    if (last != 0 && sign != last) ++cusps;
    last = sign;
  }
  return cusps;
}

ReedsSheppPath reeds_shepp_shortest(const Pose2d& a, const Pose2d& b, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("turning radius must be positive");
  const double dx = b.x() - a.x(), dy = b.y() - a.y();
  const double c = std::cos(a.yaw()), s = std::sin(a.yaw());
  const double x = (c * dx + s * dy) / radius;
  const double y = (-s * dx + c * dy) / radius;
  const double phi = normalize_angle(b.yaw() - a.yaw());
  ReedsSheppPath path;
  path.radius = radius;
  if (std::hypot(x, y) < 1e-12 && std::abs(phi) < 1e-12) return path;
  path.segments = solve_unit(x, y, phi);
  if (path.segments.empty()) throw std::logic_error("no Reeds-Shepp word matched");
  return path;
}

double reeds_shepp_distance(const Pose2d& a, const Pose2d& b, double radius) {
  return reeds_shepp_shortest(a, b, radius).length();
}

namespace {

// Advances a metric pose along one segment by metric signed length `ds`.
Pose2d advance_metric(const Pose2d& p, RsSegmentType type, double ds, double radius) {
  const Pose2d unit = advance_unit({0.0, 0.0, p.yaw()}, type, ds / radius);
  return {p.x() + radius * unit.x(), p.y() + radius * unit.y(), unit.yaw()};
}

}  // namespace

Pose2d reeds_shepp_pose_at(const Pose2d& start, const ReedsSheppPath& path, double s) {
  Pose2d p = start;
  double remaining = std::max(0.0, s);
  for (const auto& seg : path.segments) {
    const double len = std::abs(seg.length) * path.radius;
    const double take = std::min(len, remaining);
    p = advance_metric(p, seg.type, std::copysign(take, seg.length), path.radius);
    remaining -= take;
    if (remaining <= 0.0) break;
  }
  return p;
}

PathSE2 discretize(const Pose2d& start, const ReedsSheppPath& path, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("discretization step must be positive");
  std::vector<Pose2d> poses{start};
  std::vector<Direction> dirs;
  Pose2d seg_start = start;
  for (const auto& seg : path.segments) {
    const double len = std::abs(seg.length) * path.radius;
    if (len <= 0.0) continue;
    const auto n = static_cast<int>(std::ceil(len / step - 1e-9));
    const Direction d = seg.length > 0 ? Direction::kForward : Direction::kReverse;
    for (int i = 1; i <= n; ++i) {
      const double ds = len * static_cast<double>(i) / n;
      poses.push_back(advance_metric(seg_start, seg.type, std::copysign(ds, seg.length), path.radius));
      dirs.push_back(d);
    }
    seg_start = poses.back();
  }
  return PathSE2(std::move(poses), std::move(dirs));
}

PathSE2 reeds_shepp_connect(const Pose2d& a, const Pose2d& b, double radius, double step) {
  return discretize(a, reeds_shepp_shortest(a, b, radius), step);
}

}  // namespace harvest
