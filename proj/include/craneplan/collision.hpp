#pragma once

#include <optional>
#include <string>
#include <vector>

#include "craneplan/core_types.hpp"
#include "craneplan/geometry.hpp"

namespace craneplan {

/// Oriented box: center pose + half extents.
struct Obb {
  Pose3 pose;
  Vec3 half_extents;

  static Obb axis_aligned(const Point3& center, const Vec3& half) {
    return {{center, Quat::identity()}, half};
  }
};

bool obb_overlap(const Obb& a, const Obb& b);

/// Closest distance from a segment to an OBB (0 when intersecting).
double segment_obb_distance(const Segment3& seg, const Obb& box);

inline bool obb_capsule_overlap(const Obb& box, const Segment3& seg,
                                double radius) {
  return segment_obb_distance(seg, box) <= radius;
}

/// True if the box dips below the table plane z = table_z.
bool obb_below_plane(const Obb& box, double table_z);

enum class BlockingBody { None, Plate, OtherArm, SelfBody, Table, Obstacle };

inline const char* to_string(BlockingBody b) {
  switch (b) {
    case BlockingBody::None: return "None";
    case BlockingBody::Plate: return "Plate";
    case BlockingBody::OtherArm: return "OtherArm";
    case BlockingBody::SelfBody: return "SelfBody";
    case BlockingBody::Table: return "Table";
    case BlockingBody::Obstacle: return "Obstacle";
  }
  return "None";
}

/// Collision world for grasp and sweep feasibility. Arm skeletons are
/// capsules, the plate an oriented box, the table a half-space, fixtures
/// axis-aligned boxes.
struct SceneBodies {
  std::optional<Obb> plate;
  double table_z = 0.0;
  std::vector<Segment3> other_arm_segments;
  double other_arm_radius = 55.0;
  std::vector<Segment3> self_segments;
  double self_radius = 55.0;
  std::vector<Obb> obstacles;

  /// First body hit by the given box, in fixed evaluation order.
  BlockingBody first_collision(const Obb& box) const;
};

}  // namespace craneplan
