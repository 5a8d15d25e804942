#include "doctest.h"

#include <cmath>
#include <set>

#include "craneplan/errors.hpp"
#include "craneplan/rng.hpp"
#include "craneplan/workspace.hpp"
#include "support/oracles.hpp"

using namespace craneplan;

namespace {

CylinderElement make_element(const Point3& start, const Vec3& axis,
                             double len = 30.0, double radius = 6.0) {
  CylinderElement e;
  e.start = start;
  e.end = start + axis.normalized() * len;
  e.radius_mm = radius;
  return e;
}

ArmSpec test_arm(ArmSide side = ArmSide::Right) {
  ArmSpec a;
  a.name = side;
  a.shoulder = {400.0, side == ArmSide::Right ? -300.0 : 300.0, 500.0};
  a.reach_min_mm = 150.0;
  a.reach_max_mm = 800.0;
  return a;
}

SceneBodies empty_scene() {
  SceneBodies s;
  s.table_z = 0.0;
  return s;
}

}  // namespace

TEST_CASE("24 annotated grasps sweep the axis in 30 degree increments") {
  CylinderElement e = make_element({0, 0, 900}, {0, 0, -1});
  std::vector<GraspPose> grasps = annotate_grasps(e);
  REQUIRE(grasps.size() == 24);
  // First half: flip 0, axial angles in order.
  for (int k = 0; k + 1 < 12; ++k) {
    Vec3 a0 = grasps[k].element_local_transform.orientation.rotate({0, 0, 1});
    Vec3 a1 =
        grasps[k + 1].element_local_transform.orientation.rotate({0, 0, 1});
    double c = std::clamp(a0.dot(a1), -1.0, 1.0);
    CHECK(std::acos(c) == doctest::Approx(deg2rad(30.0)).epsilon(1e-9));
  }
}

TEST_CASE("every grasp approach is perpendicular to the cylinder axis") {
  CylinderElement e = make_element({40, -20, 700}, {0.3, 0.2, -0.93});
  for (const GraspPose& g : annotate_grasps(e)) {
    Vec3 approach =
        g.element_local_transform.orientation.rotate({0.0, 0.0, 1.0});
    CHECK(std::abs(approach.dot({0.0, 0.0, 1.0})) <= 1e-9);
    CHECK(g.element_local_transform.orientation.norm() ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("annotation is local: world pose does not matter") {
  CylinderElement a = make_element({0, 0, 900}, {0, 0, -1});
  CylinderElement b = make_element({500, 130, 400}, {1, 0, 0});
  auto ga = annotate_grasps(a);
  auto gb = annotate_grasps(b);
  REQUIRE(ga.size() == gb.size());
  for (size_t i = 0; i < ga.size(); ++i) {
    CHECK(ga[i].approach_index == gb[i].approach_index);
    const Pose3& pa = ga[i].element_local_transform;
    const Pose3& pb = gb[i].element_local_transform;
    CHECK((pa.position - pb.position).norm() <= 1e-12);
    CHECK(std::abs(pa.orientation.w - pb.orientation.w) <= 1e-12);
    CHECK(std::abs(pa.orientation.x - pb.orientation.x) <= 1e-12);
  }
}

TEST_CASE("reach shell boundaries and the table half-space gate grasps") {
  ArmSpec arm = test_arm();
  Quat level = frame_from_z({1.0, 0.0, 0.0});

  // 1 mm past reach_max fails.
  Pose3 too_far{arm.shoulder + Vec3{arm.reach_max_mm + 1.0, 0.0, 0.0}, level};
  CHECK_FALSE(check_reachable(arm, too_far, 0.0));

  // Midrange grasp whose approach points back toward the shoulder passes.
  Point3 mid = arm.shoulder + Vec3{400.0, 0.0, 0.0};
  Quat toward = frame_from_z((arm.shoulder - mid).normalized());
  CHECK(check_reachable(arm, Pose3{mid, toward}, 0.0));

  // Below table height fails regardless of reach.
  Pose3 below{{400.0, -300.0, -5.0}, toward};
  CHECK_FALSE(check_reachable(arm, below, 0.0));
}

TEST_CASE("gripper box overlapping the plate reports Plate blockage") {
  ArmSpec arm = test_arm();
  SceneBodies scene = empty_scene();
  scene.plate = Obb::axis_aligned({400.0, -300.0, 450.0}, {200.0, 200.0, 50.0});

  Point3 on_plate{400.0, -300.0 + 180.0, 460.0};
  Quat toward = frame_from_z((arm.shoulder - on_plate).normalized());
  GraspPose g;
  GraspFeasibility f = check_collisions(arm, g, {on_plate, toward}, scene);
  CHECK_FALSE(f.collision_free);
  CHECK(f.blocking_body == BlockingBody::Plate);

  // Free space far above stays clean.
  Point3 free_pt{420.0, -250.0, 900.0};
  Quat toward2 = frame_from_z((arm.shoulder - free_pt).normalized());
  GraspFeasibility f2 = check_collisions(arm, g, {free_pt, toward2}, scene);
  CHECK(f2.collision_free);
  CHECK(f2.blocking_body == BlockingBody::None);
}

TEST_CASE("SAT box overlap agrees with the corner and edge oracle") {
  Rng rng(23);
  int hits = 0;
  for (int i = 0; i < 400; ++i) {
    Obb a{{{rng.uniform(-100, 100), rng.uniform(-100, 100),
            rng.uniform(-100, 100)},
           Quat::from_axis_angle({rng.uniform(-1, 1), rng.uniform(-1, 1),
                                  rng.uniform(-1, 1)},
                                 rng.uniform(0, kPi))},
          {rng.uniform(10, 80), rng.uniform(10, 80), rng.uniform(10, 80)}};
    Obb b{{{rng.uniform(-100, 100), rng.uniform(-100, 100),
            rng.uniform(-100, 100)},
           Quat::from_axis_angle({rng.uniform(-1, 1), rng.uniform(-1, 1),
                                  rng.uniform(-1, 1)},
                                 rng.uniform(0, kPi))},
          {rng.uniform(10, 80), rng.uniform(10, 80), rng.uniform(10, 80)}};
    bool sat = obb_overlap(a, b);
    bool brute = oracle::obb_overlap_bruteforce(a, b);
    CHECK(sat == brute);
    hits += sat ? 1 : 0;
  }
  // The sample must exercise both outcomes to mean anything.
  CHECK(hits > 40);
  CHECK(hits < 360);
}

TEST_CASE("bulky plate blocks every left-arm grasp at the rope") {
  // Tall lifted plate standing between the left arm and the hanging rope.
  ArmSpec arm = test_arm(ArmSide::Left);
  arm.shoulder = {-350.0, 0.0, 450.0};
  SceneBodies scene = empty_scene();
  scene.plate = Obb::axis_aligned({-150.0, 0.0, 400.0}, {60.0, 260.0, 400.0});

  CylinderElement elem = make_element({0.0, 0.0, 700.0}, {0, 0, -1});
  Pose3 frame = element_world_frame(elem);
  int reachable = 0;
  for (const GraspPose& g : annotate_grasps(elem)) {
    GraspFeasibility f = evaluate_grasp(arm, g, frame, scene);
    if (!f.reachable) continue;
    ++reachable;
    CHECK_FALSE(f.collision_free);
    CHECK(f.blocking_body == BlockingBody::Plate);
    // Cross-check with the brute-force box oracle.
    Pose3 world = frame.compose(g.element_local_transform);
    CHECK(oracle::obb_overlap_bruteforce(gripper_box_at(arm, world),
                                         *scene.plate));
  }
  CHECK(reachable > 0);
}

TEST_CASE("identity goal keeps every initial grasp shared") {
  ArmSpec arm = test_arm();
  SceneBodies scene = empty_scene();
  Point3 pin{0.0, 0.0, 1150.0};
  CylinderElement elem = make_element(pin, {0, 0, -1});
  // Goal element co-located with the initial element: same frame.
  Pose3 goal = element_world_frame(elem);
  SharedGraspSet set = shared_grasps(elem, goal, arm, scene);
  CHECK(set.n_goal == set.n_init);
  CHECK((int)set.members.size() == set.n_goal);
  CHECK(set.n_init > 0);
}

TEST_CASE("goal far outside reach gives an empty error-free set") {
  ArmSpec arm = test_arm();
  SceneBodies scene = empty_scene();
  Point3 pin{0.0, 0.0, 1150.0};
  CylinderElement elem = make_element({400.0, -300.0, 700.0}, {0, 0, -1});
  Point3 far = arm.shoulder + Vec3{3000.0, 0.0, 100.0};
  SharedGraspSet set =
      shared_grasps(elem, goal_element_frame(pin, far, 30.0), arm, scene);
  CHECK(set.n_goal == 0);
  CHECK(set.members.empty());
}

TEST_CASE("shared grasps match the exhaustive double-loop oracle") {
  Rng rng(5);
  Point3 pin{0.0, 0.0, 1150.0};
  for (int trial = 0; trial < 12; ++trial) {
    ArmSpec arm = test_arm(trial % 2 == 0 ? ArmSide::Right : ArmSide::Left);
    SceneBodies scene = empty_scene();
    scene.plate = Obb::axis_aligned({rng.uniform(-200, 200),
                                     rng.uniform(-200, 200),
                                     rng.uniform(100, 500)},
                                    {rng.uniform(40, 150),
                                     rng.uniform(40, 220),
                                     rng.uniform(40, 260)});
    scene.obstacles.push_back(Obb::axis_aligned(
        {rng.uniform(-100, 300), rng.uniform(-300, 300),
         rng.uniform(300, 900)},
        {rng.uniform(30, 90), rng.uniform(30, 90), rng.uniform(30, 90)}));

    CylinderElement elem =
        make_element({rng.uniform(-50, 150), rng.uniform(-150, 150),
                      rng.uniform(600, 1000)},
                     {0, 0, -1});
    Point3 goal{rng.uniform(0, 500), rng.uniform(-400, 200),
                rng.uniform(250, 900)};
    Pose3 goal_frame = goal_element_frame(pin, goal, 30.0);

    SharedGraspSet set;
    bool threw = false;
    try {
      set = shared_grasps(elem, goal_frame, arm, scene);
    } catch (const PlannerError& e) {
      CHECK(e.code() == PlanError::NoInitialGrasp);
      threw = true;
    }

    // Independent double loop over all annotated grasps.
    Pose3 init_frame = element_world_frame(elem);
    std::set<int> init_ok, both_ok;
    for (const GraspPose& g : annotate_grasps(elem)) {
      bool init_feasible = evaluate_grasp(arm, g, init_frame, scene).feasible();
      if (!init_feasible) continue;
      init_ok.insert(g.approach_index);
      if (evaluate_grasp(arm, g, goal_frame, scene).feasible())
        both_ok.insert(g.approach_index);
    }

    if (threw) {
      CHECK(init_ok.empty());
      continue;
    }
    CHECK(set.n_init == (int)init_ok.size());
    CHECK(set.n_goal == (int)both_ok.size());
    std::set<int> members;
    for (const GraspPose& g : set.members) members.insert(g.approach_index);
    CHECK(members == both_ok);
    // Membership is a subset of both feasibility lists.
    for (int idx : members) {
      CHECK(init_ok.count(idx) == 1);
      CHECK(both_ok.count(idx) == 1);
    }
  }
}

TEST_CASE("removing an obstacle never shrinks the shared set") {
  Rng rng(29);
  Point3 pin{0.0, 0.0, 1150.0};
  for (int trial = 0; trial < 10; ++trial) {
    ArmSpec arm = test_arm();
    SceneBodies with_obstacle = empty_scene();
    with_obstacle.obstacles.push_back(Obb::axis_aligned(
        {rng.uniform(-100, 400), rng.uniform(-400, 100),
         rng.uniform(300, 900)},
        {rng.uniform(40, 140), rng.uniform(40, 140), rng.uniform(40, 140)}));
    SceneBodies without = empty_scene();

    CylinderElement elem =
        make_element({rng.uniform(0, 200), rng.uniform(-200, 0),
                      rng.uniform(600, 950)},
                     {0, 0, -1});
    Point3 goal{rng.uniform(100, 600), rng.uniform(-500, 0),
                rng.uniform(250, 900)};
    Pose3 goal_frame = goal_element_frame(pin, goal, 30.0);

    int n_with = 0, n_without = 0;
    try {
      n_with = shared_grasps(elem, goal_frame, arm, with_obstacle).n_goal;
    } catch (const PlannerError&) {
      n_with = 0;
    }
    try {
      n_without = shared_grasps(elem, goal_frame, arm, without).n_goal;
    } catch (const PlannerError&) {
      n_without = 0;
    }
    CHECK(n_without >= n_with);
  }
}
