#pragma once

#include <optional>
#include <vector>

#include "craneplan/core_types.hpp"
#include "craneplan/tumble_types.hpp"

namespace craneplan {

/// Per-instant geometry of the tumble: active pivot, pushing face (the face
/// through the pivot that looks away from the tumble direction), rope line.
struct InstantGeometry {
  double rotation = 0.0;
  int active_edge = 0;
  Vec2 pivot;        // p0, world
  Vec2 face_dir;     // unit, from the pivot along the pushing face
  Vec2 face_normal;  // unit, into the plate
  double face_len = 0.0;
  Vec2 hook;      // world
  Vec2 com;       // world
  Vec2 rope_dir;  // unit, hook -> pin (planar)
  double tau_g = 0.0;   // gravity moment about the pivot (+ = restoring)
  double c_t = 0.0;     // rope moment per unit tension about the pivot
  double weight = 0.0;  // plate weight, N
  double mu0 = 0.0;
  double mu1 = 0.0;
};

InstantGeometry instant_geometry(double rotation, const PlateSpec& plate,
                                 const EdgeContactModel& edges,
                                 const Vec2& pin_planar);

/// Strict-inequality margins (the paper's open sets made testable).
struct SolverMargins {
  double force = 1e-6;   // N and N*mm slack on force inequalities
  double angle = 1e-6;   // rad slack on the friction band
  double s_min = 1e-6;   // mm, lower end of the face parameter
  double f1_sq_min = 1e-6;  // N^2, lower bound of Eq. 7d
};

struct InstantSpec {
  double rotation = 0.0;
  PushStateKind kind = PushStateKind::S;
  double t = 0.0;
  double dt = 0.0;
};

/// Minimize k1 |F0|^2 + k2 |F1|^2 + k3 |T|^2 at one time instant subject to
/// planar equilibrium, the friction cones, the force bound and (when a
/// predecessor is given) the speed/direction chaining. Throws
/// InfeasibleInstant when no admissible state exists.
PushStep solve_push_instant(const InstantSpec& spec, const PlateSpec& plate,
                            const EdgeContactModel& edges,
                            const Vec2& pin_planar, const TumbleParams& params,
                            const PushStep* prev = nullptr,
                            const PushStep* prev_prev = nullptr);

/// Inner kernel: optimal forces for a fixed pushing point. Exposed for the
/// planner's chain search and for the test oracles.
struct InnerSolution {
  bool feasible = false;
  double objective = 0.0;
  double tension = 0.0;
  double f1_mag = 0.0;
  double beta = 0.0;  // angle of F1 from the face tangent
  Vec2 f0, f1, t_vec;
};

InnerSolution solve_at_s(const InstantGeometry& g, const TumbleParams& params,
                         PushStateKind kind, double s,
                         const SolverMargins& margins = {});

/// Plan the sliding-push trajectory from start_rotation to the tip-through
/// pose. Instants advance by a fixed rotation step; the pushing point chain
/// is optimized globally so the speed and direction constraints stay
/// feasible across the contact-edge switch.
TumbleTrajectory plan_tumble(const PlateSpec& plate,
                             const EdgeContactModel& edges,
                             const Vec2& pin_planar, const TumbleParams& params,
                             double start_rotation);

/// Reachability repair: re-solve any instant whose pushing point the arm
/// cannot reach, excluding a band around the failed parameter. Throws
/// TumbleKinematicsFailed when an instant admits no reachable point.
TumbleTrajectory check_kinematics_and_repair(const TumbleTrajectory& traj,
                                             const PlateSpec& plate,
                                             const EdgeContactModel& edges,
                                             const Vec2& pin_planar,
                                             const TumbleParams& params,
                                             const ArmSpec& arm,
                                             double table_z);

/// Displacements below this carry no meaningful pushing direction; the
/// direction constraint and the oscillation metric skip them.
constexpr double kDirectionEpsilonMm = 0.5;

/// Sum of absolute turning angles of the pushing-point path.
double oscillation_metric(const TumbleTrajectory& traj);

/// Largest distance between consecutive pushing points.
double max_adjacent_spacing(const TumbleTrajectory& traj);

/// Mean pushing-point height over the second half of the instants.
double mean_push_height_second_half(const TumbleTrajectory& traj);

/// Pushing points per instant (deduplicated across the S/SPrime pair).
std::vector<Vec2> instant_push_points(const TumbleTrajectory& traj);

}  // namespace craneplan
