#include "craneplan/collision.hpp"

#include <array>
#include <cmath>

namespace craneplan {

namespace {

std::array<Vec3, 3> box_axes(const Obb& b) {
  return {b.pose.orientation.rotate({1.0, 0.0, 0.0}),
          b.pose.orientation.rotate({0.0, 1.0, 0.0}),
          b.pose.orientation.rotate({0.0, 0.0, 1.0})};
}

double projected_radius(const Obb& b, const std::array<Vec3, 3>& axes,
                        const Vec3& dir) {
  return b.half_extents.x * std::abs(axes[0].dot(dir)) +
         b.half_extents.y * std::abs(axes[1].dot(dir)) +
         b.half_extents.z * std::abs(axes[2].dot(dir));
}

}  // namespace

bool obb_overlap(const Obb& a, const Obb& b) {
  // Separating axis test over the 15 candidate axes.
  auto ax = box_axes(a);
  auto bx = box_axes(b);
  Vec3 d = b.pose.position - a.pose.position;

  auto separated = [&](const Vec3& axis) {
    double len = axis.norm();
    if (len < 1e-12) return false;  // parallel edge pair, skip
    Vec3 n = axis * (1.0 / len);
    double dist = std::abs(d.dot(n));
    return dist > projected_radius(a, ax, n) + projected_radius(b, bx, n);
  };

  for (const Vec3& axis : ax)
    if (separated(axis)) return false;
  for (const Vec3& axis : bx)
    if (separated(axis)) return false;
  for (const Vec3& u : ax)
    for (const Vec3& v : bx)
      if (separated(u.cross(v))) return false;
  return true;
}

namespace {

double point_box_distance_local(const Vec3& p, const Vec3& half) {
  double dx = std::max({p.x - half.x, -half.x - p.x, 0.0});
  double dy = std::max({p.y - half.y, -half.y - p.y, 0.0});
  double dz = std::max({p.z - half.z, -half.z - p.z, 0.0});
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

double segment_obb_distance(const Segment3& seg, const Obb& box) {
  // Work in box-local coordinates; distance-to-box is convex along the
  // segment, so golden-section over the parameter converges to the minimum.
  Quat inv = box.pose.orientation.conjugate();
  Vec3 a = inv.rotate(seg.a - box.pose.position);
  Vec3 b = inv.rotate(seg.b - box.pose.position);

  auto dist_at = [&](double t) {
    Vec3 p = a + (b - a) * t;
    return point_box_distance_local(p, box.half_extents);
  };

  double lo = 0.0, hi = 1.0;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = dist_at(x1), f2 = dist_at(x2);
  for (int i = 0; i < 80 && (hi - lo) > 1e-10; ++i) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = dist_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = dist_at(x2);
    }
  }
  return std::min({dist_at(lo), dist_at(hi), dist_at(0.5 * (lo + hi))});
}

bool obb_below_plane(const Obb& box, double table_z) {
  auto ax = box_axes(box);
  double r = projected_radius(box, ax, {0.0, 0.0, 1.0});
  return box.pose.position.z - r < table_z;
}

BlockingBody SceneBodies::first_collision(const Obb& box) const {
  if (plate && obb_overlap(box, *plate)) return BlockingBody::Plate;
  for (const Segment3& s : other_arm_segments)
    if (obb_capsule_overlap(box, s, other_arm_radius))
      return BlockingBody::OtherArm;
  for (const Segment3& s : self_segments)
    if (obb_capsule_overlap(box, s, self_radius))
      return BlockingBody::SelfBody;
  if (obb_below_plane(box, table_z)) return BlockingBody::Table;
  for (const Obb& ob : obstacles)
    if (obb_overlap(box, ob)) return BlockingBody::Obstacle;
  return BlockingBody::None;
}

}  // namespace craneplan
