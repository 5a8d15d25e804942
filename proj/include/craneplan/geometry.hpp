#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace craneplan {

constexpr double kPi = std::numbers::pi;

/// Millimetres, kilograms, newtons, radians everywhere. Gravity in mm/s^2
/// cancels out of every static computation, so forces use g in m/s^2.
constexpr double kGravity = 9.8;  // N per kg

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// Normalize an angle to (-pi, pi].
inline double normalize_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  /// 2D cross product (z component); positive is counterclockwise.
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  Vec2 normalized() const {
    double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
  }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Rotate a vector clockwise by angle a (the tilt convention used for the
/// plate cross-section: positive tilt tips the plate toward +x).
inline Vec2 rotate_cw(const Vec2& v, double a) {
  double c = std::cos(a), s = std::sin(a);
  return {v.x * c + v.y * s, -v.x * s + v.y * c};
}

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Vec3 normalized() const {
    double n = norm();
    return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{0.0, 0.0, 0.0};
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

using Point3 = Vec3;

/// Unit quaternion; kept normalized to within 1e-9.
struct Quat {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Quat identity() { return {}; }

  static Quat from_axis_angle(const Vec3& axis, double angle) {
    Vec3 a = axis.normalized();
    double h = 0.5 * angle;
    double s = std::sin(h);
    return {std::cos(h), a.x * s, a.y * s, a.z * s};
  }

  /// Build from orthonormal column axes (rotation matrix -> quaternion).
  static Quat from_axes(const Vec3& ex, const Vec3& ey, const Vec3& ez);

  Quat operator*(const Quat& o) const {
    return {w * o.w - x * o.x - y * o.y - z * o.z,
            w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x,
            w * o.z + x * o.y - y * o.x + z * o.w};
  }

  Quat conjugate() const { return {w, -x, -y, -z}; }

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Quat normalized() const {
    double n = norm();
    return {w / n, x / n, y / n, z / n};
  }

  Vec3 rotate(const Vec3& v) const {
    // q * (0,v) * q'
    Quat p{0.0, v.x, v.y, v.z};
    Quat r = (*this) * p * conjugate();
    return {r.x, r.y, r.z};
  }
};

inline Quat Quat::from_axes(const Vec3& ex, const Vec3& ey, const Vec3& ez) {
  double m00 = ex.x, m01 = ey.x, m02 = ez.x;
  double m10 = ex.y, m11 = ey.y, m12 = ez.y;
  double m20 = ex.z, m21 = ey.z, m22 = ez.z;
  double tr = m00 + m11 + m22;
  Quat q;
  if (tr > 0.0) {
    double s = std::sqrt(tr + 1.0) * 2.0;
    q = {0.25 * s, (m21 - m12) / s, (m02 - m20) / s, (m10 - m01) / s};
  } else if (m00 > m11 && m00 > m22) {
    double s = std::sqrt(1.0 + m00 - m11 - m22) * 2.0;
    q = {(m21 - m12) / s, 0.25 * s, (m01 + m10) / s, (m02 + m20) / s};
  } else if (m11 > m22) {
    double s = std::sqrt(1.0 + m11 - m00 - m22) * 2.0;
    q = {(m02 - m20) / s, (m01 + m10) / s, 0.25 * s, (m12 + m21) / s};
  } else {
    double s = std::sqrt(1.0 + m22 - m00 - m11) * 2.0;
    q = {(m10 - m01) / s, (m02 + m20) / s, (m12 + m21) / s, 0.25 * s};
  }
  return q.normalized();
}

/// Planar pose in the plate cross-section plane. Rotation stays in (-pi, pi].
struct Pose2 {
  Vec2 position;
  double rotation = 0.0;

  Pose2 normalized() const { return {position, normalize_angle(rotation)}; }
};

struct Pose3 {
  Point3 position;
  Quat orientation;

  Point3 apply(const Point3& local) const {
    return position + orientation.rotate(local);
  }

  Pose3 compose(const Pose3& local) const {
    return {apply(local.position), (orientation * local.orientation).normalized()};
  }
};

/// Deterministic frame completion: given a unit z axis, pick x perpendicular
/// to it using a fixed reference, y = z x x. Used for rope element frames and
/// the zero-twist goal element frame.
inline Quat frame_from_z(const Vec3& z_axis) {
  Vec3 z = z_axis.normalized();
  Vec3 ref{1.0, 0.0, 0.0};
  if (std::abs(z.dot(ref)) > 0.99) ref = {0.0, 1.0, 0.0};
  Vec3 x = (ref - z * z.dot(ref)).normalized();
  Vec3 y = z.cross(x);
  return Quat::from_axes(x, y, z);
}

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace craneplan
