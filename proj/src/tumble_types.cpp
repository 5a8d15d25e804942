#include "craneplan/tumble_types.hpp"

#include <cmath>

namespace craneplan {

EdgeContactModel make_edge_model(const PlateSpec& plate, double table_z) {
  EdgeContactModel e;
  e.first_edge = {0.0, table_z};
  e.second_edge = {plate.width_mm, table_z};
  e.switch_angle = kPi / 2.0;
  return e;
}

namespace {

// Cross-section local corners: the pivot edge is (h, 0), its thickness-face
// neighbour (h, w). The plate body extends toward x = 0.
Vec2 local_first_corner(const PlateSpec& p) { return {p.height_mm, 0.0}; }
Vec2 local_second_corner(const PlateSpec& p) {
  return {p.height_mm, p.width_mm};
}

}  // namespace

Vec2 cross_section_point(double rotation, const PlateSpec& plate,
                         const EdgeContactModel& edges, const Vec2& local) {
  if (rotation < edges.switch_angle) {
    return edges.first_edge +
           rotate_cw(local - local_first_corner(plate), rotation);
  }
  return edges.second_edge +
         rotate_cw(local - local_second_corner(plate), rotation);
}

PlatePose2 plate_pose_at(double rotation, const PlateSpec& plate,
                         const EdgeContactModel& edges) {
  PlatePose2 out;
  out.active_edge = rotation < edges.switch_angle ? 0 : 1;
  out.pivot = out.active_edge == 0 ? edges.first_edge : edges.second_edge;
  out.pose.position = cross_section_point(rotation, plate, edges, {0.0, 0.0});
  out.pose.rotation = normalize_angle(-rotation);
  return out;
}

double gravity_moment(double rotation, const PlateSpec& plate,
                      const EdgeContactModel& edges) {
  PlatePose2 pp = plate_pose_at(rotation, plate, edges);
  Vec2 com = cross_section_point(rotation, plate, edges, plate.com_offset_mm);
  Vec2 r = com - pp.pivot;
  Vec2 g{0.0, -plate.weight_newton()};
  return r.cross(g);  // positive = counterclockwise = restoring
}

double tip_angle(const PlateSpec& plate, const EdgeContactModel& edges) {
  const Vec2 rg = plate.com_offset_mm;
  // Crossing about the first edge: rotated x component of (rg - A) vanishes.
  double a1 = std::atan2(plate.height_mm - rg.x, rg.y);
  if (a1 <= edges.switch_angle) return a1;
  // Otherwise the first crossing happens about the second edge.
  double b = std::atan2(plate.width_mm - rg.y, plate.height_mm - rg.x);
  return edges.switch_angle + b;
}

double tip_through_angle(const PlateSpec& plate,
                         const EdgeContactModel& edges) {
  const Vec2 rg = plate.com_offset_mm;
  double b = std::atan2(plate.width_mm - rg.y, plate.height_mm - rg.x);
  return edges.switch_angle + b;
}

PlateBox3 plate_box_at(double rotation, const PlateSpec& plate,
                       const EdgeContactModel& edges) {
  Vec2 center2 = cross_section_point(
      rotation, plate, edges, {plate.height_mm / 2.0, plate.width_mm / 2.0});
  PlateBox3 box;
  box.center = {center2.x, 0.0, center2.y};
  box.half_extents = {plate.height_mm / 2.0, plate.length_mm / 2.0,
                      plate.width_mm / 2.0};
  box.rotation = rotation;
  return box;
}

}  // namespace craneplan
