#pragma once

#include <optional>
#include <string>
#include <vector>

#include "craneplan/pull_planner.hpp"
#include "craneplan/rng.hpp"
#include "craneplan/sim.hpp"

namespace craneplan {

enum class FailureCause {
  NoInitialPose,
  NoFeasiblePair,
  MotionPlanFailed,
  PlateCollisionResolvedByMovingOtherArm,
  ReGrip,
};

inline const char* to_string(FailureCause c) {
  switch (c) {
    case FailureCause::NoInitialPose: return "NoInitialPose";
    case FailureCause::NoFeasiblePair: return "NoFeasiblePair";
    case FailureCause::MotionPlanFailed: return "MotionPlanFailed";
    case FailureCause::PlateCollisionResolvedByMovingOtherArm:
      return "PlateCollisionResolvedByMovingOtherArm";
    case FailureCause::ReGrip: return "ReGrip";
  }
  return "ReGrip";
}

struct FailureRecord {
  int loop = 0;
  ArmSide arm = ArmSide::Right;
  FailureCause cause = FailureCause::ReGrip;
};

struct LiftLoopState {
  std::vector<double> alpha_history;  // alpha_0 (initial), then per pull
  std::vector<double> d_history;      // executed pull lengths
  ArmSide active_arm = ArmSide::Right;
  double alpha_thld = 0.0;
  int loop_count = 0;
  std::vector<FailureRecord> failures;
};

/// One row of the per-loop event log.
struct LiftEvent {
  int loop = 0;
  ArmSide arm = ArmSide::Right;
  std::string event;  // "pull", "regrip", "skip", "park_other"
  std::string cause;  // failure cause or "success"
  double d_mm = 0.0;
  double alpha_before = 0.0;  // rad
  double alpha_after = 0.0;   // rad
  double q = 0.0;
  QualityVector f;
  double theta = 0.0;        // rad
  double force_proxy = 0.0;  // N
};

struct PullRecord {
  int loop = 0;
  ArmSide arm = ArmSide::Right;
  double distance_mm = 0.0;
  double force_proxy = 0.0;
  double q = 0.0;
  QualityVector f;
  double theta = 0.0;
  Point3 goal;
  double planning_time_s = 0.0;
};

struct LiftResult {
  LiftLoopState loop_state;
  std::vector<LiftEvent> events;
  std::vector<PullRecord> pulls;
  SimState final_state;
  std::vector<SimSnapshot> snapshots;
  /// Eq. 5 predictions recorded before each executed pull that had history:
  /// (predicted, measured-after) pairs for the upper-bound property.
  std::vector<std::pair<double, double>> predictions;
};

/// Post-execution tilt estimate: alpha_cur + (alpha_cur - alpha_prev) *
/// d_cur / d_prev. Throws InsufficientHistory when no previous pull exists.
double predict_tilt(double alpha_prev, double alpha_cur, double d_prev,
                    double d_cur);

/// Pull-length adjustment: d_prev * (alpha_thld - alpha_cur) /
/// (alpha_cur - alpha_prev). Throws StalledLift when alpha_cur <= alpha_prev.
double adjust_pull_length(double alpha_thld, double alpha_cur,
                          double alpha_prev, double d_prev);

/// True simulator tilt plus N(0, sigma^2), clamped to [0, pi/2].
double measure_tilt(const SimState& state, double noise_sigma, Rng& rng);

/// Conservative first-pull length: min(150 mm, reach span / 4).
double bootstrap_pull_length(const ArmSpec& arm);

/// Closed-loop alternating-arm lift to the threshold angle. Throws
/// LiftFailed when both arms report NoInitialPose in consecutive loops.
LiftResult run_lift_loop(const SimWorld& world, SimState state, Rng& rng);

}  // namespace craneplan
