#include "craneplan/workspace.hpp"

#include <cmath>

#include "craneplan/errors.hpp"

namespace craneplan {

std::vector<GraspPose> annotate_grasps(const CylinderElement& element,
                                       int count) {
  // `count` = axial angles x 2 flips; angles first, flips second, so the
  // first half enumerates the axial sweep in order.
  int n_angles = count / 2;
  std::vector<GraspPose> out;
  out.reserve(count);
  double half_len = element.length() * 0.5;
  for (int flip = 0; flip < 2; ++flip) {
    for (int k = 0; k < n_angles; ++k) {
      double psi = 2.0 * kPi * k / n_angles;
      // Approach axis radially inward, perpendicular to the element axis.
      Vec3 approach{std::cos(psi), std::sin(psi), 0.0};
      Vec3 closing{0.0, 0.0, flip == 0 ? 1.0 : -1.0};
      Vec3 third = closing.cross(approach);
      GraspPose g;
      g.approach_index = flip * n_angles + k;
      g.element_local_transform.position = {0.0, 0.0, half_len};
      g.element_local_transform.orientation =
          Quat::from_axes(third, closing, approach);
      out.push_back(g);
    }
  }
  return out;
}

Pose3 element_world_frame(const CylinderElement& element) {
  return {element.start, frame_from_z(element.axis())};
}

Vec3 grasp_approach_world(const Pose3& world_grasp) {
  // Local +z of the grasp frame is the approach axis.
  return world_grasp.orientation.rotate({0.0, 0.0, 1.0});
}

bool check_reachable(const ArmSpec& arm, const Pose3& world_grasp,
                     double table_z) {
  const Point3& p = world_grasp.position;
  if (p.z <= table_z) return false;
  double d = (p - arm.shoulder).norm();
  if (d < arm.reach_min_mm || d > arm.reach_max_mm) return false;
  Vec3 approach = grasp_approach_world(world_grasp);
  Vec3 toward_shoulder = (arm.shoulder - p).normalized();
  double c = approach.dot(toward_shoulder);
  return std::acos(std::clamp(c, -1.0, 1.0)) <= arm.approach_cone_half_angle;
}

Obb gripper_box_at(const ArmSpec& arm, const Pose3& world_grasp) {
  // The gripper body trails behind the grasp point on the side the hand
  // came from; the approach axis points back toward the shoulder.
  Vec3 approach = grasp_approach_world(world_grasp);
  Point3 center = world_grasp.position + approach * (arm.gripper_box_mm.z * 0.5);
  return {{center, world_grasp.orientation}, arm.gripper_box_mm * 0.5};
}

GraspFeasibility check_collisions(const ArmSpec& arm, const GraspPose& grasp,
                                  const Pose3& world_grasp,
                                  const SceneBodies& scene) {
  GraspFeasibility f;
  f.grasp = grasp;
  f.reachable = true;
  f.blocking_body = scene.first_collision(gripper_box_at(arm, world_grasp));
  f.collision_free = f.blocking_body == BlockingBody::None;
  return f;
}

GraspFeasibility evaluate_grasp(const ArmSpec& arm, const GraspPose& grasp,
                                const Pose3& element_frame,
                                const SceneBodies& scene) {
  Pose3 world = element_frame.compose(grasp.element_local_transform);
  if (!check_reachable(arm, world, scene.table_z)) {
    GraspFeasibility f;
    f.grasp = grasp;
    f.reachable = false;
    return f;
  }
  return check_collisions(arm, grasp, world, scene);
}

Pose3 goal_element_frame(const Point3& pin, const Point3& goal,
                         double element_length_mm) {
  Vec3 axis = (goal - pin).normalized();
  // Element centered on the goal point so the grasp midpoint lands there.
  return {goal - axis * (element_length_mm * 0.5), frame_from_z(axis)};
}

SharedGraspSet shared_grasps(const CylinderElement& init_elem,
                             const Pose3& goal_frame, const ArmSpec& arm,
                             const SceneBodies& scene) {
  SharedGraspSet set;
  Pose3 init_frame = element_world_frame(init_elem);
  std::vector<GraspPose> grasps = annotate_grasps(init_elem);
  std::vector<GraspPose> init_ok;
  for (const GraspPose& g : grasps) {
    if (evaluate_grasp(arm, g, init_frame, scene).feasible())
      init_ok.push_back(g);
  }
  set.n_init = (int)init_ok.size();
  if (set.n_init == 0)
    throw PlannerError(PlanError::NoInitialGrasp,
                       "no feasible grasp at the initial element");
  for (const GraspPose& g : init_ok) {
    if (evaluate_grasp(arm, g, goal_frame, scene).feasible()) {
      set.members.push_back(g);
    }
  }
  set.n_goal = (int)set.members.size();
  return set;
}

}  // namespace craneplan
