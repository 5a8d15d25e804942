#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "craneplan/geometry.hpp"

namespace craneplan {

/// Plate described by its cross-section rectangle (h along the tumble plane,
/// w thickness) extruded laterally by l. Offsets r_g (center of mass) and
/// r_h (crane hook) live in the cross-section frame: x in [0, h], y in [0, w],
/// with the tumble pivot edge at x = h.
struct PlateSpec {
  std::string name;
  double height_mm = 0.0;  // h: cross-section extent in the tumble plane
  double length_mm = 0.0;  // l: lateral extent along the contact edge
  double width_mm = 0.0;   // w: thickness
  double mass_kg = 0.0;
  Vec2 com_offset_mm;   // r_g
  Vec2 hook_offset_mm;  // r_h
  double mu0 = 0.0;     // table contact friction
  double mu1 = 0.0;     // fingertip contact friction

  double weight_newton() const { return mass_kg * kGravity; }
};

struct CylinderElement {
  Point3 start;
  Point3 end;
  double radius_mm = 0.0;
  bool valid = true;

  Point3 midpoint() const { return (start + end) * 0.5; }
  Vec3 axis() const { return (end - start).normalized(); }
  double length() const { return (end - start).norm(); }
};

/// Free pulling tail of the crane rope, modelled as a chain of equal rigid
/// cylinders hanging from the upper pulley pin. The hook side of the tackle
/// is tracked through hook_point and pulley_ratio.
struct RopeState {
  Point3 pin_point;
  std::vector<CylinderElement> elements;
  Point3 hook_point;
  double pulley_ratio = 2.0;  // rope length pulled per unit hook travel
  double total_pulled_mm = 0.0;
  double element_length_mm = 30.0;
  double element_radius_mm = 6.0;
};

enum class ArmSide { Left, Right };

inline const char* to_string(ArmSide s) {
  return s == ArmSide::Left ? "Left" : "Right";
}

struct Segment3 {
  Point3 a;
  Point3 b;
};

struct ArmSpec {
  ArmSide name = ArmSide::Left;
  Point3 shoulder;
  double reach_min_mm = 0.0;
  double reach_max_mm = 0.0;
  std::vector<Segment3> body_segments;  // coarse arm/torso capsule skeleton
  double body_radius_mm = 55.0;
  Vec3 gripper_box_mm{40.0, 30.0, 80.0};  // full extents
  double approach_cone_half_angle = deg2rad(100.0);
  Point3 parked_hand;  // tuck pose used when this arm obstructs the other
};

/// Axis-aligned scene obstacle (fixtures such as the crane frame posts, or
/// the intentional workspace blocks of the goal-distribution studies).
struct ObstacleBox {
  Point3 center;
  Vec3 half_extents;
};

struct TumbleParams {
  double k1 = 1.0;
  double k2 = 1.0;
  double k3 = 1.0;
  double f1_sq_max = 30.0;  // bound on F1^T F1, N^2
  double v_max = 30.0;      // pushing hand speed bound, mm/s
  double gamma = deg2rad(20.0);
  double dt = 0.0;  // derived when <= 0 (see plan_tumble)
  int n_steps = 60;
  bool enforce_speed = true;      // Eq. 7h toggle for ablations
  bool enforce_direction = true;  // Eq. 7i toggle for ablations
};

struct Scenario {
  std::string id;
  PlateSpec plate;
  ArmSpec left_arm;
  ArmSpec right_arm;
  RopeState rope;
  double table_height_mm = 0.0;
  double alpha_thld = deg2rad(70.0);
  std::array<double, 3> quality_weights{1.0, 1.0, 1.0};
  int goal_sample_count = 200;
  TumbleParams tumble;
  double noise_sigma_angle = 0.0;
  std::uint64_t rng_seed = 0;
  std::vector<ObstacleBox> obstacles;
  int initial_element_count = 20;
  double force_proxy_cap = 200.0;  // N

  const ArmSpec& arm(ArmSide s) const {
    return s == ArmSide::Left ? left_arm : right_arm;
  }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Report-style invariant check; empty report iff the scenario is runnable.
ValidationReport validate_scenario(const Scenario& s);

/// Rotation of the hook about the tumble pivot at which the hook passes the
/// vertical through the pivot. Quasi-static lifting works below this angle.
double hook_apex_angle(const PlateSpec& plate);

/// Hook radius about the first pivot edge; the lift's arc lever.
double hook_radius(const PlateSpec& plate);

}  // namespace craneplan
