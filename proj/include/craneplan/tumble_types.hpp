#pragma once

#include <optional>
#include <vector>

#include "craneplan/core_types.hpp"
#include "craneplan/geometry.hpp"

namespace craneplan {

/// Contact-edge model of the tumbling cross-section. The plate starts flat
/// with its pivot edge at first_edge and rotates clockwise (toward +x);
/// at switch_angle the thickness face has come flat and rotation continues
/// about second_edge.
struct EdgeContactModel {
  Vec2 first_edge;
  Vec2 second_edge;
  double switch_angle = kPi / 2.0;
};

/// Edges for a plate whose pivot edge sits at x = 0 on the table.
EdgeContactModel make_edge_model(const PlateSpec& plate, double table_z);

struct PlatePose2 {
  Pose2 pose;          // world pose of the cross-section local origin
  int active_edge = 0; // 0 = first edge, 1 = second edge
  Vec2 pivot;          // world position of the active rotation center
};

/// Rigid pose of the cross-section at a given total rotation from flat.
/// Continuous across the edge switch.
PlatePose2 plate_pose_at(double rotation, const PlateSpec& plate,
                         const EdgeContactModel& edges);

/// World position of a cross-section point at a given rotation.
Vec2 cross_section_point(double rotation, const PlateSpec& plate,
                         const EdgeContactModel& edges, const Vec2& local);

/// Smallest rotation at which the center of mass stands vertically above the
/// active contact edge (gravity moment about the edge changes sign).
double tip_angle(const PlateSpec& plate, const EdgeContactModel& edges);

/// Rotation at which the center of mass clears the final (second) edge; the
/// plate completes the flip under gravity beyond this.
double tip_through_angle(const PlateSpec& plate, const EdgeContactModel& edges);

/// Signed gravity moment about the active edge (positive = restoring,
/// pulls the plate back toward smaller rotation). N * mm.
double gravity_moment(double rotation, const PlateSpec& plate,
                      const EdgeContactModel& edges);

enum class PushStateKind { S, SPrime };

inline const char* to_string(PushStateKind k) {
  return k == PushStateKind::S ? "S" : "SPrime";
}

/// One solved force state of the tumble. Vectors live in the cross-section
/// plane; r_1 is pivot -> push point along the pushing face.
struct PushStep {
  double t = 0.0;               // s
  double plate_rotation = 0.0;  // rad, total rotation from flat
  Vec2 rotation_center;         // p0, world
  Vec2 push_point;              // p1, world
  Vec2 r1;                      // p0 -> p1
  Vec2 r_t;                     // p0 -> hook
  Vec2 r_g;                     // p0 -> com
  Vec2 F0;                      // table contact force, N
  Vec2 F1;                      // fingertip force, N
  Vec2 T;                       // rope tension, N (zero in SPrime)
  PushStateKind state_kind = PushStateKind::S;
  double objective_value = 0.0;
  int active_edge = 0;
  double s_on_face = 0.0;  // |r1| along the pushing face
};

struct TumbleTrajectory {
  std::vector<PushStep> steps;  // ordered, alternating S / SPrime per t_i
  std::optional<int> edge_switch_index;  // instant index of the first
                                         // second-edge instant
  int tip_index = 0;                     // instant index where pushing stops
  int n_instants = 0;
  double dt = 0.0;              // s between instants
  double rotation_step = 0.0;   // rad between instants
  double start_rotation = 0.0;
};

/// Oriented 3D box of the plate at a cross-section rotation, for collision.
struct PlateBox3 {
  Point3 center;
  Vec3 half_extents;
  double rotation = 0.0;  // about the world y axis, clockwise positive
};

PlateBox3 plate_box_at(double rotation, const PlateSpec& plate,
                       const EdgeContactModel& edges);

}  // namespace craneplan
