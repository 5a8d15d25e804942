#include "doctest.h"

#include <cmath>
#include <cstring>

#include "craneplan/errors.hpp"
#include "craneplan/scenario_io.hpp"
#include "craneplan/sim.hpp"

using namespace craneplan;

namespace {

SimWorld acrylic_world() {
  return SimWorld::from_scenario(make_reference_scenario("acrylic_board"));
}

}  // namespace

TEST_CASE("zero pull leaves the state unchanged") {
  SimWorld w = acrylic_world();
  SimState s0 = initial_state(w);
  SimState s1 = apply_pull(w, s0, 0.0);
  CHECK(s1.plate_tilt == s0.plate_tilt);
  CHECK(s1.pulled_total_mm == s0.pulled_total_mm);
}

TEST_CASE("tilt increases strictly with cumulative pull until overlift") {
  SimWorld w = acrylic_world();
  SimState s = initial_state(w);
  double prev = s.plate_tilt;
  for (int i = 0; i < 10; ++i) {
    s = apply_pull(w, s, 150.0);
    CHECK(s.plate_tilt > prev);
    prev = s.plate_tilt;
  }
  // Enough rope to cross pi/2 must refuse.
  CHECK_THROWS_AS(apply_pull(w, s, 1e6), PlannerError);
}

TEST_CASE("rope pulled to 70 degrees matches the closed-form hook travel") {
  SimWorld w = acrylic_world();
  SimState s = initial_state(w);
  double ratio = w.scenario.rope.pulley_ratio;
  double radius = hook_radius(w.scenario.plate);
  CHECK(radius == doctest::Approx(std::hypot(300.0, 40.0)).epsilon(1e-12));

  double target = deg2rad(70.0);
  double rope_needed = ratio * radius * target;
  s = apply_pull(w, s, rope_needed);
  CHECK(s.plate_tilt == doctest::Approx(target).epsilon(1e-9));
  // Conservation: pulled equals pulley_ratio x hook travel, within 1e-6.
  CHECK(s.pulled_total_mm ==
        doctest::Approx(ratio * hook_travel(w, s.plate_tilt)).epsilon(1e-9));
}

TEST_CASE("hook height is non-decreasing while lifting") {
  SimWorld w = acrylic_world();
  SimState s = initial_state(w);
  double prev_z = snapshot(w, s).hook_height_mm;
  for (int i = 0; i < 12; ++i) {
    s = apply_pull(w, s, 120.0);
    double z = snapshot(w, s).hook_height_mm;
    CHECK(z >= prev_z - 1e-9);
    prev_z = z;
  }
}

TEST_CASE("hand force proxy follows mg over ratio over cos theta") {
  Scenario sc = make_reference_scenario("acrylic_board");
  sc.rope.pulley_ratio = 2.0;
  SimWorld w = SimWorld::from_scenario(sc);
  SimState s = initial_state(w);

  // Vertical pull: theta = 0 at a goal straight below the pin.
  Point3 below = sc.rope.pin_point + Vec3{0.0, 0.0, -500.0};
  ForceProxy vertical = hand_force_proxy(w, s, below);
  CHECK(vertical.rope_tilt_theta == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(vertical.rope_tension_at_hand == doctest::Approx(19.6).epsilon(1e-9));

  // 60 degrees doubles the tension.
  double r = 500.0;
  Point3 tilted = sc.rope.pin_point +
                  Vec3{r * std::sin(deg2rad(60.0)), 0.0,
                       -r * std::cos(deg2rad(60.0))};
  ForceProxy sixty = hand_force_proxy(w, s, tilted);
  CHECK(sixty.rope_tilt_theta == doctest::Approx(deg2rad(60.0)).epsilon(1e-9));
  CHECK(sixty.rope_tension_at_hand ==
        doctest::Approx(2.0 * vertical.rope_tension_at_hand).epsilon(1e-9));

  // Strictly increasing in theta.
  double prev = 0.0;
  for (double deg = 0.0; deg <= 80.0; deg += 10.0) {
    Point3 p = sc.rope.pin_point + Vec3{r * std::sin(deg2rad(deg)), 0.0,
                                        -r * std::cos(deg2rad(deg))};
    double t = hand_force_proxy(w, s, p).rope_tension_at_hand;
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("tumble step at the current rotation is a no-op") {
  SimWorld w = acrylic_world();
  SimState s = initial_state(w);
  s = apply_pull(w, s, 500.0);
  s = begin_tumbling(w, s);
  PushStep step;
  step.plate_rotation = s.plate_tilt;
  SimState after = apply_tumble_step(w, s, step);
  CHECK(after.plate_tilt == s.plate_tilt);
  CHECK(after.plate_pose.position.x ==
        doctest::Approx(s.plate_pose.position.x).epsilon(1e-12));
}

TEST_CASE("tumble step past the switch pivots about the second edge") {
  SimWorld w = acrylic_world();
  SimState s = initial_state(w);
  s = apply_pull(w, s, 500.0);
  s = begin_tumbling(w, s);
  PushStep step;
  step.plate_rotation = deg2rad(95.0);
  s = apply_tumble_step(w, s, step);
  PlatePose2 pp = plate_pose_at(s.plate_tilt, w.scenario.plate, w.edges);
  CHECK(pp.active_edge == 1);
  CHECK(pp.pivot.x == doctest::Approx(w.scenario.plate.width_mm));
}

TEST_CASE("return phase feeds the rope back until the plate lies flat") {
  SimWorld w = acrylic_world();
  SimState s = initial_state(w);
  s = apply_pull(w, s, 2000.0);
  s = begin_tumbling(w, s);
  PushStep step;
  step.plate_rotation = deg2rad(98.0);
  s = apply_tumble_step(w, s, step);
  s = begin_returning(w, s);

  SUBCASE("zero feed leaves the state unchanged") {
    SimState after = apply_return(w, s, 0.0);
    CHECK(after.plate_tilt == s.plate_tilt);
  }

  SUBCASE("feeding the total pulled length flattens the plate") {
    double prev = tilt_from_table(s);
    SimState cur = s;
    double budget = cur.pulled_total_mm;
    int n = 12;
    for (int i = 0; i < n; ++i) {
      cur = apply_return(w, cur, budget / n);
      double t = tilt_from_table(cur);
      CHECK(t <= prev + 1e-12);  // monotone non-increasing
      prev = t;
    }
    CHECK(tilt_from_table(cur) <= deg2rad(1.0));
    CHECK(cur.phase == SimPhase::Done);
  }
}

TEST_CASE("identical command sequences give bit-identical states") {
  auto run = [] {
    SimWorld w = acrylic_world();
    SimState s = initial_state(w);
    s = apply_pull(w, s, 333.25);
    s = apply_pull(w, s, 417.5, Point3{120.0, 30.0, 700.0});
    return s;
  };
  SimState a = run();
  SimState b = run();
  CHECK(std::memcmp(&a.plate_tilt, &b.plate_tilt, sizeof(double)) == 0);
  CHECK(std::memcmp(&a.pulled_total_mm, &b.pulled_total_mm, sizeof(double)) ==
        0);
  REQUIRE(a.rope.elements.size() == b.rope.elements.size());
  for (size_t i = 0; i < a.rope.elements.size(); ++i) {
    CHECK(a.rope.elements[i].start.x == b.rope.elements[i].start.x);
    CHECK(a.rope.elements[i].end.z == b.rope.elements[i].end.z);
  }
}

TEST_CASE("rope chain stays contiguous through every drape") {
  SimWorld w = acrylic_world();
  SimState s = initial_state(w);
  auto check_contiguous = [](const RopeState& rope) {
    for (size_t i = 1; i < rope.elements.size(); ++i) {
      Vec3 gap = rope.elements[i].start - rope.elements[i - 1].end;
      CHECK(gap.norm() <= 1e-6);
    }
    for (const CylinderElement& e : rope.elements) {
      CHECK(e.length() ==
            doctest::Approx(rope.element_length_mm).epsilon(1e-9));
    }
  };
  check_contiguous(s.rope);
  s = apply_pull(w, s, 400.0, Point3{150.0, -40.0, 650.0});
  check_contiguous(s.rope);
  s = apply_pull(w, s, 800.0, Point3{-60.0, 10.0, 400.0});
  check_contiguous(s.rope);
}
