#include "doctest.h"

#include <cmath>

#include "craneplan/core_types.hpp"
#include "craneplan/rng.hpp"
#include "craneplan/scenario_io.hpp"

using namespace craneplan;

TEST_CASE("acrylic reference scenario validates clean") {
  Scenario s = make_reference_scenario("acrylic_board");
  CHECK(s.plate.height_mm == 300.0);
  CHECK(s.plate.length_mm == 300.0);
  CHECK(s.plate.width_mm == 40.0);
  CHECK(s.plate.mass_kg == 4.0);
  CHECK(s.plate.mu0 == 0.5);
  CHECK(s.plate.mu1 == 0.4);
  ValidationReport rep = validate_scenario(s);
  for (const auto& v : rep.violations) INFO(v);
  CHECK(rep.ok());
}

TEST_CASE("zero mass is reported as a mass violation") {
  Scenario s = make_reference_scenario("acrylic_board");
  s.plate.mass_kg = 0.0;
  ValidationReport rep = validate_scenario(s);
  REQUIRE_FALSE(rep.ok());
  bool found = false;
  for (const auto& v : rep.violations)
    found = found || v.find("mass") != std::string::npos;
  CHECK(found);
}

TEST_CASE("all-zero quality weights are rejected") {
  Scenario s = make_reference_scenario("acrylic_board");
  s.quality_weights = {0.0, 0.0, 0.0};
  ValidationReport rep = validate_scenario(s);
  REQUIRE_FALSE(rep.ok());
  bool found = false;
  for (const auto& v : rep.violations)
    found = found || v.find("weight vector") != std::string::npos;
  CHECK(found);
}

TEST_CASE("stainless and plywood references validate clean") {
  for (const char* name : {"stainless_box", "plywood_board"}) {
    Scenario s = make_reference_scenario(name);
    ValidationReport rep = validate_scenario(s);
    for (const auto& v : rep.violations) INFO(name << ": " << v);
    CHECK(rep.ok());
  }
}

TEST_CASE("pose2 rotation normalization is idempotent") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    Pose2 p{{rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3)},
            rng.uniform(-20.0, 20.0)};
    Pose2 once = p.normalized();
    Pose2 twice = once.normalized();
    CHECK(once.rotation == doctest::Approx(twice.rotation).epsilon(1e-15));
    CHECK(once.rotation > -kPi);
    CHECK(once.rotation <= kPi + 1e-15);
  }
}

namespace {

void check_scenarios_equal(const Scenario& a, const Scenario& b) {
  CHECK(a.id == b.id);
  CHECK(a.plate.name == b.plate.name);
  CHECK(a.plate.height_mm == b.plate.height_mm);
  CHECK(a.plate.length_mm == b.plate.length_mm);
  CHECK(a.plate.width_mm == b.plate.width_mm);
  CHECK(a.plate.mass_kg == b.plate.mass_kg);
  CHECK(a.plate.com_offset_mm.x == b.plate.com_offset_mm.x);
  CHECK(a.plate.com_offset_mm.y == b.plate.com_offset_mm.y);
  CHECK(a.plate.hook_offset_mm.x == b.plate.hook_offset_mm.x);
  CHECK(a.plate.hook_offset_mm.y == b.plate.hook_offset_mm.y);
  CHECK(a.plate.mu0 == b.plate.mu0);
  CHECK(a.plate.mu1 == b.plate.mu1);
  CHECK(a.rope.pin_point.x == b.rope.pin_point.x);
  CHECK(a.rope.pin_point.z == b.rope.pin_point.z);
  CHECK(a.rope.pulley_ratio == b.rope.pulley_ratio);
  CHECK(a.rope.element_length_mm == b.rope.element_length_mm);
  CHECK(a.initial_element_count == b.initial_element_count);
  CHECK(a.left_arm.shoulder.x == b.left_arm.shoulder.x);
  CHECK(a.left_arm.reach_max_mm == b.left_arm.reach_max_mm);
  CHECK(a.left_arm.body_segments.size() == b.left_arm.body_segments.size());
  CHECK(a.right_arm.shoulder.y == b.right_arm.shoulder.y);
  CHECK(a.table_height_mm == b.table_height_mm);
  CHECK(a.alpha_thld == b.alpha_thld);
  CHECK(a.quality_weights == b.quality_weights);
  CHECK(a.goal_sample_count == b.goal_sample_count);
  CHECK(a.tumble.f1_sq_max == b.tumble.f1_sq_max);
  CHECK(a.tumble.v_max == b.tumble.v_max);
  CHECK(a.tumble.gamma == doctest::Approx(b.tumble.gamma).epsilon(1e-12));
  CHECK(a.tumble.n_steps == b.tumble.n_steps);
  CHECK(a.tumble.enforce_speed == b.tumble.enforce_speed);
  CHECK(a.tumble.enforce_direction == b.tumble.enforce_direction);
  CHECK(a.noise_sigma_angle == b.noise_sigma_angle);
  CHECK(a.rng_seed == b.rng_seed);
  CHECK(a.obstacles.size() == b.obstacles.size());
  for (size_t i = 0; i < a.obstacles.size(); ++i) {
    CHECK(a.obstacles[i].center.x == b.obstacles[i].center.x);
    CHECK(a.obstacles[i].half_extents.z == b.obstacles[i].half_extents.z);
  }
}

}  // namespace

TEST_CASE("scenario text round-trip is the identity") {
  for (const char* name :
       {"acrylic_board", "stainless_box", "plywood_board"}) {
    Scenario s = make_reference_scenario(name);
    std::string text = serialize_scenario(s);
    Scenario back = parse_scenario(text);
    check_scenarios_equal(s, back);
    // Serializing again must give byte-identical text.
    CHECK(serialize_scenario(back) == text);
  }
}

TEST_CASE("malformed scenario text raises a line-tagged error") {
  CHECK_THROWS_AS(parse_scenario("plate.height_mm 300"), std::runtime_error);
  CHECK_THROWS_AS(parse_scenario("[plate\nheight_mm = 1"),
                  std::runtime_error);
}
