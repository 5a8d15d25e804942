#include "craneplan/core_types.hpp"

#include <cmath>
#include <sstream>

namespace craneplan {

namespace {

void require(ValidationReport& rep, bool cond, const std::string& msg) {
  if (!cond) rep.violations.push_back(msg);
}

bool inside_cross_section(const Vec2& p, const PlateSpec& plate) {
  return p.x >= -1e-9 && p.x <= plate.height_mm + 1e-9 && p.y >= -1e-9 &&
         p.y <= plate.width_mm + 1e-9;
}

void validate_arm(ValidationReport& rep, const ArmSpec& arm) {
  std::string tag = std::string("arm.") + to_string(arm.name) + ": ";
  require(rep, arm.reach_min_mm > 0.0, tag + "reach_min must be positive");
  require(rep, arm.reach_min_mm < arm.reach_max_mm,
          tag + "reach_min must be below reach_max");
}

}  // namespace

double hook_radius(const PlateSpec& plate) {
  Vec2 r = plate.hook_offset_mm - Vec2{plate.height_mm, 0.0};
  return r.norm();
}

double hook_apex_angle(const PlateSpec& plate) {
  // Hook position relative to the pivot edge (h, 0) crosses the vertical
  // when the rotated x component vanishes.
  double dx = plate.height_mm - plate.hook_offset_mm.x;
  double dy = plate.hook_offset_mm.y;
  return std::atan2(dx, dy);
}

ValidationReport validate_scenario(const Scenario& s) {
  ValidationReport rep;
  const PlateSpec& p = s.plate;

  require(rep, p.height_mm > 0.0, "plate: height must be positive");
  require(rep, p.length_mm > 0.0, "plate: length must be positive");
  require(rep, p.width_mm > 0.0, "plate: width must be positive");
  require(rep, p.mass_kg > 0.0, "plate: mass must be positive");
  require(rep, p.mu0 > 0.0 && p.mu0 <= 2.0, "plate: mu0 outside (0, 2]");
  require(rep, p.mu1 > 0.0 && p.mu1 <= 2.0, "plate: mu1 outside (0, 2]");
  require(rep, inside_cross_section(p.com_offset_mm, p),
          "plate: com offset outside the cross-section rectangle");
  require(rep, inside_cross_section(p.hook_offset_mm, p),
          "plate: hook offset outside the cross-section rectangle");

  validate_arm(rep, s.left_arm);
  validate_arm(rep, s.right_arm);
  require(rep, s.left_arm.name == ArmSide::Left, "arms: first arm must be Left");
  require(rep, s.right_arm.name == ArmSide::Right,
          "arms: second arm must be Right");

  require(rep, s.rope.pulley_ratio >= 1.0, "rope: pulley_ratio must be >= 1");
  require(rep, s.rope.element_length_mm > 0.0,
          "rope: element length must be positive");
  require(rep, s.initial_element_count >= 1,
          "rope: initial element count must be >= 1");
  require(rep, s.rope.pin_point.z > s.table_height_mm,
          "rope: pin must sit above the table");

  require(rep, s.alpha_thld > 0.0 && s.alpha_thld < kPi / 2.0,
          "lift: alpha_thld outside (0, pi/2)");
  if (p.height_mm > 0.0 && p.width_mm > 0.0) {
    require(rep, s.alpha_thld < hook_apex_angle(p) - deg2rad(1.0),
            "lift: alpha_thld must stay below the hook apex angle");
  }

  bool any_weight = false;
  for (double w : s.quality_weights) {
    require(rep, w >= 0.0, "lift: quality weights must be nonnegative");
    if (w > 0.0) any_weight = true;
  }
  require(rep, any_weight, "lift: quality weight vector must not be all zero");
  require(rep, s.goal_sample_count >= 1, "lift: goal_sample_count must be >= 1");

  const TumbleParams& t = s.tumble;
  require(rep, t.k1 >= 0.0 && t.k2 >= 0.0 && t.k3 >= 0.0,
          "tumble: objective weights must be nonnegative");
  require(rep, t.k1 + t.k2 + t.k3 > 0.0,
          "tumble: objective weights must not all vanish");
  require(rep, t.f1_sq_max > 0.0, "tumble: f1_sq_max must be positive");
  require(rep, t.v_max > 0.0, "tumble: v_max must be positive");
  require(rep, t.gamma > 0.0 && t.gamma <= kPi,
          "tumble: gamma outside (0, pi]");
  require(rep, t.n_steps >= 2, "tumble: n_steps must be >= 2");

  require(rep, s.noise_sigma_angle >= 0.0,
          "lift: noise sigma must be nonnegative");
  return rep;
}

}  // namespace craneplan
