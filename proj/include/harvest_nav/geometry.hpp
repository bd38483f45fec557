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

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace harvest {

/// Wraps an angle into (-pi, pi].
template <typename Scalar>
Scalar normalize_angle(Scalar angle) {
  constexpr Scalar kPi = std::numbers::pi_v<Scalar>;
  Scalar wrapped = std::remainder(angle, Scalar(2) * kPi);
  if (wrapped <= -kPi) wrapped += Scalar(2) * kPi;
  return wrapped;
}

/// Planar rigid transform (x, y, yaw). Yaw is kept in (-pi, pi].
template <typename Scalar>
class PoseSE2 {
 public:
  using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
  using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

  PoseSE2() = default;
  PoseSE2(Scalar x, Scalar y, Scalar yaw)
      : translation_(x, y), yaw_(normalize_angle(yaw)) {}
  PoseSE2(const Vector2& translation, Scalar yaw)
      : translation_(translation), yaw_(normalize_angle(yaw)) {}

  static PoseSE2 Identity() { return PoseSE2(); }

  Scalar x() const { return translation_.x(); }
  Scalar y() const { return translation_.y(); }
  Scalar yaw() const { return yaw_; }
  const Vector2& translation() const { return translation_; }

  Matrix2 rotation() const {
    return Eigen::Rotation2D<Scalar>(yaw_).toRotationMatrix();
  }

  /// Unit vector along the body x axis.
  Vector2 heading() const { return Vector2(std::cos(yaw_), std::sin(yaw_)); }

  Matrix3 matrix() const {
    Matrix3 m = Matrix3::Identity();
    m.template topLeftCorner<2, 2>() = rotation();
    m.template topRightCorner<2, 1>() = translation_;
    return m;
  }

  static PoseSE2 FromMatrix(const Matrix3& m) {
    return PoseSE2(m.template topRightCorner<2, 1>(), std::atan2(m(1, 0), m(0, 0)));
  }

  PoseSE2 inverse() const {
    const Matrix2 rt = rotation().transpose();
    return PoseSE2(-(rt * translation_), -yaw_);
  }

  /// Maps a point expressed in this frame into the parent frame.
  Vector2 operator*(const Vector2& p) const { return rotation() * p + translation_; }

  /// Composition a * b: b expressed in a's frame, lifted to a's parent.
  PoseSE2 operator*(const PoseSE2& other) const {
    return PoseSE2(rotation() * other.translation_ + translation_, yaw_ + other.yaw_);
  }

  template <typename Other>
  PoseSE2<Other> cast() const {
    return PoseSE2<Other>(translation_.template cast<Other>(), static_cast<Other>(yaw_));
  }

 private:
  Vector2 translation_ = Vector2::Zero();
  Scalar yaw_ = Scalar(0);
};

using Pose2d = PoseSE2<double>;

/// Frame composition a ∘ b with yaw renormalized.
template <typename Scalar>
PoseSE2<Scalar> transform_pose(const PoseSE2<Scalar>& a, const PoseSE2<Scalar>& b) {
  return a * b;
}

template <typename Scalar>
Scalar planar_distance(const PoseSE2<Scalar>& a, const PoseSE2<Scalar>& b) {
  return (a.translation() - b.translation()).norm();
}

/// Distance from p to the closed segment [a, b].
inline double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                                     const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

inline double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace harvest
