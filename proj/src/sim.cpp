#include "craneplan/sim.hpp"

#include <cmath>

#include "craneplan/errors.hpp"

namespace craneplan {

SimWorld SimWorld::from_scenario(const Scenario& s) {
  SimWorld w;
  w.scenario = s;
  w.edges = make_edge_model(s.plate, s.table_height_mm);
  return w;
}

double hook_travel(const SimWorld& world, double tilt) {
  return hook_radius(world.scenario.plate) * tilt;
}

Point3 hook_world(const SimWorld& world, double tilt) {
  Vec2 p = cross_section_point(tilt, world.scenario.plate, world.edges,
                               world.scenario.plate.hook_offset_mm);
  return {p.x, 0.0, p.y};
}

RopeState drape_rope(const SimWorld& world, const RopeState& rope,
                     const std::optional<Point3>& hand) {
  RopeState out = rope;
  double len = out.element_length_mm;
  double tail_len = world.scenario.initial_element_count * len +
                    out.total_pulled_mm;
  int n = std::max(1, (int)std::floor(tail_len / len));
  out.elements.clear();
  out.elements.reserve(n);

  Point3 cur = out.pin_point;
  Vec3 stretched_dir{0.0, 0.0, -1.0};
  double stretched_len = 0.0;
  if (hand) {
    stretched_dir = (*hand - out.pin_point).normalized();
    stretched_len = (*hand - out.pin_point).norm();
  }
  double table = world.scenario.table_height_mm + out.element_radius_mm;
  double run = 0.0;
  for (int i = 0; i < n; ++i) {
    Vec3 dir;
    if (run + len <= stretched_len) {
      dir = stretched_dir;
    } else if (cur.z - len > table) {
      dir = {0.0, 0.0, -1.0};
    } else {
      dir = {1.0, 0.0, 0.0};  // slack folds along the table
    }
    CylinderElement e;
    e.start = cur;
    e.end = cur + dir * len;
    e.radius_mm = out.element_radius_mm;
    e.valid = i < (int)rope.elements.size() ? rope.elements[i].valid : true;
    out.elements.push_back(e);
    cur = e.end;
    run += len;
  }
  return out;
}

SimState initial_state(const SimWorld& world) {
  SimState st;
  st.rope = world.scenario.rope;
  st.rope.total_pulled_mm = 0.0;
  st.rope.hook_point = hook_world(world, 0.0);
  st.rope = drape_rope(world, st.rope, std::nullopt);
  st.plate_tilt = 0.0;
  st.plate_pose =
      plate_pose_at(0.0, world.scenario.plate, world.edges).pose;
  st.phase = SimPhase::Lifting;
  return st;
}

namespace {

/// Solve tilt from a hook-travel target by bisection (monotone map).
double solve_tilt(const SimWorld& world, double travel_target, double lo,
                  double hi) {
  auto f = [&](double a) { return hook_travel(world, a) - travel_target; };
  for (int i = 0; i < 200 && (hi - lo) > 1e-12; ++i) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SimState apply_pull(const SimWorld& world, SimState state, double d,
                    const std::optional<Point3>& hand) {
  if (state.phase != SimPhase::Lifting)
    throw PlannerError(PlanError::OverLift, "apply_pull outside Lifting");
  if (d < 0.0) throw PlannerError(PlanError::OverLift, "negative pull");
  if (d == 0.0) return state;

  double ratio = state.rope.pulley_ratio;
  double travel_target = hook_travel(world, state.plate_tilt) + d / ratio;
  double upper = kPi / 2.0 - 1e-6;
  if (travel_target >= hook_travel(world, upper))
    throw PlannerError(PlanError::OverLift,
                       "pull would lift the plate past pi/2");
  double tilt = solve_tilt(world, travel_target, state.plate_tilt, upper);

  state.plate_tilt = tilt;
  state.plate_pose =
      plate_pose_at(tilt, world.scenario.plate, world.edges).pose;
  state.pulled_total_mm += d;
  state.rope.total_pulled_mm = state.pulled_total_mm;
  state.rope.hook_point = hook_world(world, tilt);
  state.rope = drape_rope(world, state.rope, hand);
  return state;
}

ForceProxy hand_force_proxy(const SimWorld& world, const SimState& state,
                            const Point3& goal_point) {
  ForceProxy fp;
  Vec3 line = goal_point - state.rope.pin_point;
  double c = line.normalized().dot({0.0, 0.0, -1.0});
  fp.rope_tilt_theta = std::acos(std::clamp(c, -1.0, 1.0));
  double base = world.scenario.plate.weight_newton() / state.rope.pulley_ratio;
  double cosv = std::cos(fp.rope_tilt_theta);
  double t = cosv > 1e-9 ? base / cosv : world.scenario.force_proxy_cap;
  fp.rope_tension_at_hand = std::min(t, world.scenario.force_proxy_cap);
  return fp;
}

SimState begin_tumbling(const SimWorld& world, SimState state) {
  (void)world;
  state.phase = SimPhase::Tumbling;
  return state;
}

SimState apply_tumble_step(const SimWorld& world, SimState state,
                           const PushStep& step) {
  if (state.phase != SimPhase::Tumbling)
    throw PlannerError(PlanError::InfeasibleInstant,
                       "apply_tumble_step outside Tumbling");
  if (step.plate_rotation < state.plate_tilt - 1e-9)
    throw PlannerError(PlanError::InfeasibleInstant,
                       "tumble rotation must not decrease");
  double rot = std::max(step.plate_rotation, state.plate_tilt);
  state.plate_tilt = rot;
  state.plate_pose =
      plate_pose_at(rot, world.scenario.plate, world.edges).pose;
  state.rope.hook_point = hook_world(world, rot);
  return state;
}

SimState begin_returning(const SimWorld& world, SimState state) {
  (void)world;
  state.phase = SimPhase::Returning;
  state.return_budget_mm = state.pulled_total_mm;
  state.return_start_rotation = state.plate_tilt;
  return state;
}

SimState apply_return(const SimWorld& world, SimState state, double fed_mm) {
  if (state.phase == SimPhase::Done) return state;
  if (state.phase != SimPhase::Returning)
    throw PlannerError(PlanError::OverLift, "apply_return outside Returning");
  if (fed_mm <= 0.0) return state;

  double span = kPi - state.return_start_rotation;
  double budget = state.pulled_total_mm;
  double drot = budget > 0.0 ? fed_mm * span / budget : span;
  double rot = std::min(kPi, state.plate_tilt + drot);
  state.plate_tilt = rot;
  state.plate_pose =
      plate_pose_at(std::min(rot, kPi - 1e-12), world.scenario.plate,
                    world.edges)
          .pose;
  state.return_budget_mm = std::max(0.0, state.return_budget_mm - fed_mm);
  state.rope.hook_point = hook_world(world, std::min(rot, kPi - 1e-12));
  if (kPi - rot <= deg2rad(1.0)) state.phase = SimPhase::Done;
  return state;
}

double tilt_from_table(const SimState& state) {
  return std::min(state.plate_tilt, kPi - state.plate_tilt);
}

Obb plate_obb(const SimWorld& world, const SimState& state) {
  PlateBox3 b = plate_box_at(state.plate_tilt, world.scenario.plate,
                             world.edges);
  // Clockwise rotation in the x-z plane equals +rotation about world +y.
  Quat q = Quat::from_axis_angle({0.0, 1.0, 0.0}, b.rotation);
  return {{b.center, q}, b.half_extents};
}

SceneBodies make_scene(const SimWorld& world, const SimState& state,
                       ArmSide active,
                       const std::optional<Point3>& other_hand) {
  SceneBodies sc;
  sc.plate = plate_obb(world, state);
  sc.table_z = world.scenario.table_height_mm;
  const ArmSpec& self = world.scenario.arm(active);
  const ArmSpec& other = world.scenario.arm(
      active == ArmSide::Left ? ArmSide::Right : ArmSide::Left);
  sc.self_segments = self.body_segments;
  sc.self_radius = self.body_radius_mm;
  sc.other_arm_segments = other.body_segments;
  sc.other_arm_radius = other.body_radius_mm;
  Point3 hand = other_hand.value_or(other.parked_hand);
  sc.other_arm_segments.push_back({other.shoulder, hand});
  for (const ObstacleBox& ob : world.scenario.obstacles)
    sc.obstacles.push_back(Obb::axis_aligned(ob.center, ob.half_extents));
  return sc;
}

SimSnapshot snapshot(const SimWorld& world, const SimState& state) {
  SimSnapshot s;
  s.phase = state.phase;
  s.tilt_deg = rad2deg(state.plate_tilt);
  s.pulled_total_mm = state.pulled_total_mm;
  s.hook_height_mm =
      hook_world(world, std::min(state.plate_tilt, kPi - 1e-12)).z;
  return s;
}

}  // namespace craneplan
