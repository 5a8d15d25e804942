#pragma once

#include <array>
#include <vector>

#include "craneplan/core_types.hpp"
#include "craneplan/rng.hpp"
#include "craneplan/workspace.hpp"

namespace craneplan {

struct GoalSample {
  Point3 point;
  double l = 0.0;      // pin -> goal distance, mm
  double theta = 0.0;  // stretched-rope tilt from vertical, rad
};

struct QualityVector {
  double f_length = 0.0;
  double f_load = 0.0;
  double f_grasps = 0.0;
};

struct InitGoalPair {
  int init_element_index = 0;
  GoalSample goal;
  SharedGraspSet shared;
  QualityVector f;
  double q = 0.0;
  int sample_index = 0;
};

struct PullCommand {
  ArmSide arm = ArmSide::Right;
  GraspPose grasp;
  Pose3 start;
  Pose3 end;
  double path_length_mm = 0.0;
};

struct InitSelection {
  int index = 0;
  std::vector<GraspFeasibility> feasibility;
  std::vector<int> newly_invalidated;  // element slots exhausted by the scan
};

/// Scan the rope from its top-most element and pick the first valid one with
/// at least one feasible grasp. Scanned elements without one are reported
/// invalidated. Throws NoInitialPose when the whole rope is exhausted.
InitSelection select_init_element(const RopeState& rope, const ArmSpec& arm,
                                  const SceneBodies& scene);

/// n goal points uniform over the arm's reach shell, below the pin and above
/// the table; l and theta filled. Deterministic for a fixed rng state.
std::vector<GoalSample> sample_goals(const ArmSpec& arm, const RopeState& rope,
                                     double table_z, int n, Rng& rng);

/// f_length = (l - l_min) / (l_max - l_min); a degenerate batch (l_max equals
/// l_min) maps everything to 1.
double quality_length(double l, double l_min, double l_max);

/// f_load = cos(theta).
double quality_load(double theta);

/// f_grasps = n_goal / n_init. Throws NoInitialGrasp when n_init = 0.
double quality_grasps(const SharedGraspSet& shared);

/// Q = w . f
double score(const std::array<double, 3>& weights, const QualityVector& f);

/// Evaluate every sample with n_goal >= 1 and return the Q-argmax; ties break
/// toward larger l, then lower sample index. Throws NoFeasiblePair when no
/// sample admits a shared grasp.
InitGoalPair select_best_pair(const RopeState& rope, const ArmSpec& arm,
                              const SceneBodies& scene,
                              const std::array<double, 3>& weights,
                              const std::vector<GoalSample>& samples,
                              const InitSelection& init);

/// Straight-line pull from the init grasp to the same grasp at the goal;
/// accepts the first shared member whose swept gripper box stays free over
/// `sweep_steps` interpolation steps. Throws MotionPlanFailed otherwise.
PullCommand plan_pull(const InitGoalPair& pair, const RopeState& rope,
                      const ArmSpec& arm, const SceneBodies& scene,
                      int sweep_steps = 20);

}  // namespace craneplan
