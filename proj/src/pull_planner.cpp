#include "craneplan/pull_planner.hpp"

#include <algorithm>
#include <cmath>

#include "craneplan/errors.hpp"

namespace craneplan {

InitSelection select_init_element(const RopeState& rope, const ArmSpec& arm,
                                  const SceneBodies& scene) {
  InitSelection sel;
  for (int i = 0; i < (int)rope.elements.size(); ++i) {
    const CylinderElement& e = rope.elements[i];
    if (!e.valid) continue;
    Pose3 frame = element_world_frame(e);
    std::vector<GraspFeasibility> feas;
    bool any = false;
    for (const GraspPose& g : annotate_grasps(e)) {
      GraspFeasibility f = evaluate_grasp(arm, g, frame, scene);
      any = any || f.feasible();
      feas.push_back(f);
    }
    if (any) {
      sel.index = i;
      sel.feasibility = std::move(feas);
      return sel;
    }
    sel.newly_invalidated.push_back(i);
  }
  throw PlannerError(PlanError::NoInitialPose,
                     "all rope elements traversed without a feasible grasp");
}

std::vector<GoalSample> sample_goals(const ArmSpec& arm, const RopeState& rope,
                                     double table_z, int n, Rng& rng) {
  std::vector<GoalSample> out;
  out.reserve(n);
  double r3_min = std::pow(arm.reach_min_mm, 3.0);
  double r3_max = std::pow(arm.reach_max_mm, 3.0);
  int guard = 0;
  while ((int)out.size() < n) {
    if (++guard > n * 10000)
      throw PlannerError(PlanError::NoFeasiblePair,
                         "goal sampling failed to hit the reach shell");
    // Volume-uniform radius, uniform direction.
    double u = rng.uniform();
    double r = std::cbrt(r3_min + u * (r3_max - r3_min));
    double z = rng.uniform(-1.0, 1.0);
    double phi = rng.uniform(0.0, 2.0 * kPi);
    double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    Vec3 dir{s * std::cos(phi), s * std::sin(phi), z};
    Point3 p = arm.shoulder + dir * r;
    if (p.z <= table_z + 20.0) continue;
    if (p.z >= rope.pin_point.z) continue;
    GoalSample g;
    g.point = p;
    g.l = (p - rope.pin_point).norm();
    double c = (p - rope.pin_point).normalized().dot({0.0, 0.0, -1.0});
    g.theta = std::acos(std::clamp(c, -1.0, 1.0));
    if (g.theta > kPi / 2.0) continue;
    out.push_back(g);
  }
  return out;
}

double quality_length(double l, double l_min, double l_max) {
  if (l_max - l_min <= 1e-12) return 1.0;  // degenerate single-sample batch
  return (l - l_min) / (l_max - l_min);
}

double quality_load(double theta) { return std::cos(theta); }

double quality_grasps(const SharedGraspSet& shared) {
  if (shared.n_init <= 0)
    throw PlannerError(PlanError::NoInitialGrasp, "n_init is zero");
  return (double)shared.n_goal / (double)shared.n_init;
}

double score(const std::array<double, 3>& weights, const QualityVector& f) {
  return weights[0] * f.f_length + weights[1] * f.f_load +
         weights[2] * f.f_grasps;
}

InitGoalPair select_best_pair(const RopeState& rope, const ArmSpec& arm,
                              const SceneBodies& scene,
                              const std::array<double, 3>& weights,
                              const std::vector<GoalSample>& samples,
                              const InitSelection& init) {
  const CylinderElement& elem = rope.elements[init.index];

  struct Candidate {
    int sample_index;
    SharedGraspSet shared;
  };
  std::vector<Candidate> feasible;
  for (int i = 0; i < (int)samples.size(); ++i) {
    Pose3 goal_frame = goal_element_frame(rope.pin_point, samples[i].point,
                                          rope.element_length_mm);
    SharedGraspSet shared = shared_grasps(elem, goal_frame, arm, scene);
    if (shared.n_goal >= 1) feasible.push_back({i, std::move(shared)});
  }
  if (feasible.empty())
    throw PlannerError(PlanError::NoFeasiblePair,
                       "no sampled goal forms a feasible init-goal pair");

  // Batch extremes over the feasible samples only, so infeasible goals do
  // not distort the normalization.
  double l_min = samples[feasible.front().sample_index].l;
  double l_max = l_min;
  for (const Candidate& c : feasible) {
    l_min = std::min(l_min, samples[c.sample_index].l);
    l_max = std::max(l_max, samples[c.sample_index].l);
  }

  const InitGoalPair* best = nullptr;
  std::vector<InitGoalPair> pairs;
  pairs.reserve(feasible.size());
  for (Candidate& c : feasible) {
    const GoalSample& g = samples[c.sample_index];
    InitGoalPair p;
    p.init_element_index = init.index;
    p.goal = g;
    p.shared = std::move(c.shared);
    p.f.f_length = quality_length(g.l, l_min, l_max);
    p.f.f_load = quality_load(g.theta);
    p.f.f_grasps = quality_grasps(p.shared);
    p.q = score(weights, p.f);
    p.sample_index = c.sample_index;
    pairs.push_back(std::move(p));
  }
  for (const InitGoalPair& p : pairs) {
    if (!best) {
      best = &p;
      continue;
    }
    if (p.q > best->q + 1e-15 ||
        (std::abs(p.q - best->q) <= 1e-15 &&
         (p.goal.l > best->goal.l + 1e-12 ||
          (std::abs(p.goal.l - best->goal.l) <= 1e-12 &&
           p.sample_index < best->sample_index)))) {
      best = &p;
    }
  }
  return *best;
}

PullCommand plan_pull(const InitGoalPair& pair, const RopeState& rope,
                      const ArmSpec& arm, const SceneBodies& scene,
                      int sweep_steps) {
  const CylinderElement& elem = rope.elements[pair.init_element_index];
  Pose3 init_frame = element_world_frame(elem);
  Pose3 goal_frame = goal_element_frame(rope.pin_point, pair.goal.point,
                                        rope.element_length_mm);
  for (const GraspPose& g : pair.shared.members) {
    Pose3 start = init_frame.compose(g.element_local_transform);
    Pose3 end = goal_frame.compose(g.element_local_transform);
    bool free = true;
    for (int k = 0; k <= sweep_steps; ++k) {
      double t = (double)k / sweep_steps;
      Pose3 p = start;
      p.position = start.position + (end.position - start.position) * t;
      // Orientation interpolation is irrelevant for the box sweep test;
      // keep the start orientation which bounds the swept volume well.
      if (scene.first_collision(gripper_box_at(arm, p)) !=
          BlockingBody::None) {
        free = false;
        break;
      }
    }
    if (!free) continue;
    PullCommand cmd;
    cmd.arm = arm.name;
    cmd.grasp = g;
    cmd.start = start;
    cmd.end = end;
    cmd.path_length_mm = (end.position - start.position).norm();
    return cmd;
  }
  throw PlannerError(PlanError::MotionPlanFailed,
                     "all shared grasps sweep through a collision");
}

}  // namespace craneplan
