#pragma once

#include <stdexcept>
#include <string>

namespace craneplan {

/// Planner failure kinds. These map one-to-one onto the recovery branches of
/// the closed-loop workflow, so the lift controller dispatches on them.
enum class PlanError {
  NoInitialGrasp,
  NoInitialPose,
  NoFeasiblePair,
  MotionPlanFailed,
  StalledLift,
  InsufficientHistory,
  LiftFailed,
  OverLift,
  InfeasibleInstant,
  TumbleKinematicsFailed,
};

inline const char* to_string(PlanError e) {
  switch (e) {
    case PlanError::NoInitialGrasp: return "NoInitialGrasp";
    case PlanError::NoInitialPose: return "NoInitialPose";
    case PlanError::NoFeasiblePair: return "NoFeasiblePair";
    case PlanError::MotionPlanFailed: return "MotionPlanFailed";
    case PlanError::StalledLift: return "StalledLift";
    case PlanError::InsufficientHistory: return "InsufficientHistory";
    case PlanError::LiftFailed: return "LiftFailed";
    case PlanError::OverLift: return "OverLift";
    case PlanError::InfeasibleInstant: return "InfeasibleInstant";
    case PlanError::TumbleKinematicsFailed: return "TumbleKinematicsFailed";
  }
  return "Unknown";
}

class PlannerError : public std::runtime_error {
 public:
  PlannerError(PlanError code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  PlanError code() const { return code_; }

 private:
  PlanError code_;
};

}  // namespace craneplan
