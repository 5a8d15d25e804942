#pragma once

#include <optional>
#include <vector>

#include "craneplan/collision.hpp"
#include "craneplan/core_types.hpp"
#include "craneplan/tumble_types.hpp"

namespace craneplan {

enum class SimPhase { Lifting, Tumbling, Returning, Done };

inline const char* to_string(SimPhase p) {
  switch (p) {
    case SimPhase::Lifting: return "Lifting";
    case SimPhase::Tumbling: return "Tumbling";
    case SimPhase::Returning: return "Returning";
    case SimPhase::Done: return "Done";
  }
  return "Done";
}

/// Quasi-static ground truth. The plate tilt maps to pulled rope through the
/// pulley kinematics: pulled length = pulley_ratio x hook travel along its
/// rotation arc about the contact edge. The map is solved by bisection so
/// tilt is always consistent with the rope budget to 1e-9 rad.
struct SimState {
  RopeState rope;
  Pose2 plate_pose;
  double plate_tilt = 0.0;  // total rotation from flat, rad
  SimPhase phase = SimPhase::Lifting;
  double pulled_total_mm = 0.0;

  // Return-phase bookkeeping: rope budget left and the proportional scale.
  double return_budget_mm = 0.0;
  double return_start_rotation = 0.0;
};

/// Immutable context shared by all sim transitions.
struct SimWorld {
  Scenario scenario;
  EdgeContactModel edges;

  static SimWorld from_scenario(const Scenario& s);
};

SimState initial_state(const SimWorld& world);

/// Hook travel along its rotation arc from flat; pulled rope equals
/// pulley_ratio times this. Closed form: hook radius x rotation.
double hook_travel(const SimWorld& world, double tilt);

/// World position of the crane hook at a given tilt.
Point3 hook_world(const SimWorld& world, double tilt);

struct ForceProxy {
  double rope_tension_at_hand = 0.0;  // N
  double rope_tilt_theta = 0.0;       // rad from vertical
};

/// Pull d mm of rope through the tackle. Throws OverLift if the resulting
/// tilt would reach pi/2. `hand` is the pulling hand's end position, used
/// only to re-drape the rope chain.
SimState apply_pull(const SimWorld& world, SimState state, double d,
                    const std::optional<Point3>& hand = std::nullopt);

/// Analytic hand-tension estimate for a stretched rope toward `goal_point`.
ForceProxy hand_force_proxy(const SimWorld& world, const SimState& state,
                            const Point3& goal_point);

/// Advance the tumble to the step's rotation; the rope is held or loosened
/// according to the step kind, which does not alter the pose.
SimState apply_tumble_step(const SimWorld& world, SimState state,
                           const PushStep& step);

SimState begin_tumbling(const SimWorld& world, SimState state);

/// After the plate tips through, gravity completes the flip against the
/// rope; entering Returning snapshots the rope budget.
SimState begin_returning(const SimWorld& world, SimState state);

/// Feed rope back; tilt-to-flat decreases proportionally and the phase
/// flips to Done at <= 1 degree.
SimState apply_return(const SimWorld& world, SimState state, double fed_mm);

/// Angular distance from lying flat (either face).
double tilt_from_table(const SimState& state);

/// Collision scene as seen by `active` arm at the current sim state.
SceneBodies make_scene(const SimWorld& world, const SimState& state,
                       ArmSide active, const std::optional<Point3>& other_hand);

/// Plate oriented box for the current pose.
Obb plate_obb(const SimWorld& world, const SimState& state);

/// Re-drape the rope chain: straight pin->hand for the stretched part, then
/// vertical slack below (folded along +x at the table).
RopeState drape_rope(const SimWorld& world, const RopeState& rope,
                     const std::optional<Point3>& hand);

struct SimSnapshot {
  SimPhase phase;
  double tilt_deg;
  double pulled_total_mm;
  double hook_height_mm;
};

SimSnapshot snapshot(const SimWorld& world, const SimState& state);

}  // namespace craneplan
