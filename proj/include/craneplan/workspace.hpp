#pragma once

#include <vector>

#include "craneplan/collision.hpp"
#include "craneplan/core_types.hpp"

namespace craneplan {

/// Grasp annotated in the cylinder element's local frame (z along the
/// element axis). The approach axis is perpendicular to the cylinder axis.
struct GraspPose {
  Pose3 element_local_transform;
  int approach_index = 0;
};

struct GraspFeasibility {
  GraspPose grasp;
  bool reachable = false;
  bool collision_free = false;  // unspecified when !reachable
  BlockingBody blocking_body = BlockingBody::None;

  bool feasible() const { return reachable && collision_free; }
};

struct SharedGraspSet {
  int n_init = 0;
  int n_goal = 0;
  std::vector<GraspPose> members;
};

/// Number of grasps annotated per element: half as many axial angles, each
/// with two wrist flips.
constexpr int kGraspsPerElement = 24;

/// Deterministic local-frame grasp set for one element: uniform rotations
/// about the cylinder axis times two wrist flips.
std::vector<GraspPose> annotate_grasps(const CylinderElement& element,
                                       int count = kGraspsPerElement);

/// World frame of a rope element: origin at start, z toward end, x/y by the
/// fixed frame completion (zero twist).
Pose3 element_world_frame(const CylinderElement& element);

/// World approach direction of a grasp placed at an element frame.
Vec3 grasp_approach_world(const Pose3& world_grasp);

/// Reach-shell plus approach-cone membership; the stand-in for IK.
bool check_reachable(const ArmSpec& arm, const Pose3& world_grasp,
                     double table_z);

/// Gripper-box collision query against the scene. Pre: check_reachable true.
GraspFeasibility check_collisions(const ArmSpec& arm, const GraspPose& grasp,
                                  const Pose3& world_grasp,
                                  const SceneBodies& scene);

/// Full reach + collision evaluation of one grasp at one element frame.
GraspFeasibility evaluate_grasp(const ArmSpec& arm, const GraspPose& grasp,
                                const Pose3& element_frame,
                                const SceneBodies& scene);

/// Oriented box swept by the gripper at a given world grasp pose.
Obb gripper_box_at(const ArmSpec& arm, const Pose3& world_grasp);

/// Frame of the virtual goal element: the cylinder oriented along the
/// pin -> goal line (stretched rope), zero twist, centered on the goal.
Pose3 goal_element_frame(const Point3& pin, const Point3& goal,
                         double element_length_mm);

/// Intersection of the grasps feasible at the initial element with those
/// whose identical local transforms stay feasible at the goal frame.
/// Throws NoInitialGrasp when nothing is feasible at the initial element.
SharedGraspSet shared_grasps(const CylinderElement& init_elem,
                             const Pose3& goal_frame, const ArmSpec& arm,
                             const SceneBodies& scene);

}  // namespace craneplan
