#include "craneplan/lift_controller.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "craneplan/errors.hpp"

namespace craneplan {

double predict_tilt(double alpha_prev, double alpha_cur, double d_prev,
                    double d_cur) {
  if (d_prev <= 0.0)
    throw PlannerError(PlanError::InsufficientHistory,
                       "prediction needs a completed previous pull");
  return alpha_cur + (alpha_cur - alpha_prev) * d_cur / d_prev;
}

double adjust_pull_length(double alpha_thld, double alpha_cur,
                          double alpha_prev, double d_prev) {
  if (alpha_cur <= alpha_prev)
    throw PlannerError(PlanError::StalledLift,
                       "no tilt progress between pulls");
  return d_prev * (alpha_thld - alpha_cur) / (alpha_cur - alpha_prev);
}

double measure_tilt(const SimState& state, double noise_sigma, Rng& rng) {
  double a = state.plate_tilt;
  if (noise_sigma > 0.0) a += rng.normal(0.0, noise_sigma);
  return std::clamp(a, 0.0, kPi / 2.0);
}

double bootstrap_pull_length(const ArmSpec& arm) {
  return std::min(150.0, (arm.reach_max_mm - arm.reach_min_mm) / 4.0);
}

namespace {

ArmSide other(ArmSide s) {
  return s == ArmSide::Left ? ArmSide::Right : ArmSide::Left;
}

struct LoopOutcome {
  bool pulled = false;
  bool no_initial_pose = false;
};

}  // namespace

LiftResult run_lift_loop(const SimWorld& world, SimState state, Rng& rng) {
  const Scenario& sc = world.scenario;
  LiftResult res;
  LiftLoopState& ls = res.loop_state;
  ls.alpha_thld = sc.alpha_thld;
  ls.active_arm = ArmSide::Right;
  ls.alpha_history.push_back(measure_tilt(state, sc.noise_sigma_angle, rng));

  res.snapshots.push_back(snapshot(world, state));

  // Termination uses a hair of slack so an exact landing on the threshold
  // still counts as reached.
  const double stop_tol = 1e-6;
  bool prev_loop_no_initial = false;
  const int max_loops = 200;

  while (ls.alpha_history.back() < ls.alpha_thld - stop_tol) {
    if (ls.loop_count++ >= max_loops)
      throw PlannerError(PlanError::LiftFailed, "loop budget exhausted");
    int loop = ls.loop_count;
    ArmSide arm_side = ls.active_arm;
    const ArmSpec& arm = sc.arm(arm_side);
    double alpha_before = ls.alpha_history.back();

    auto log_skip = [&](FailureCause cause, const char* what) {
      ls.failures.push_back({loop, arm_side, cause});
      LiftEvent ev;
      ev.loop = loop;
      ev.arm = arm_side;
      ev.event = what;
      ev.cause = to_string(cause);
      ev.alpha_before = alpha_before;
      ev.alpha_after = alpha_before;
      res.events.push_back(ev);
    };

    auto t0 = std::chrono::steady_clock::now();
    SceneBodies scene = make_scene(world, state, arm_side, std::nullopt);

    InitSelection init;
    try {
      init = select_init_element(state.rope, arm, scene);
    } catch (const PlannerError& e) {
      if (e.code() != PlanError::NoInitialPose) throw;
      if (prev_loop_no_initial)
        throw PlannerError(PlanError::LiftFailed,
                           "both arms report NoInitialPose");
      prev_loop_no_initial = true;
      log_skip(FailureCause::NoInitialPose, "skip");
      ls.active_arm = other(arm_side);
      continue;
    }
    prev_loop_no_initial = false;
    for (int idx : init.newly_invalidated)
      state.rope.elements[idx].valid = false;

    Rng sample_rng = rng.fork((std::uint64_t)loop);
    std::vector<GoalSample> samples = sample_goals(
        arm, state.rope, sc.table_height_mm, sc.goal_sample_count, sample_rng);

    InitGoalPair pair;
    PullCommand cmd;
    bool planned = false;
    bool parked_other = false;
    for (int attempt = 0; attempt < 2 && !planned; ++attempt) {
      try {
        pair = select_best_pair(state.rope, arm, scene, sc.quality_weights,
                                samples, init);
        cmd = plan_pull(pair, state.rope, arm, scene);
        planned = true;
      } catch (const PlannerError& e) {
        if (e.code() != PlanError::NoFeasiblePair &&
            e.code() != PlanError::MotionPlanFailed &&
            e.code() != PlanError::NoInitialGrasp)
          throw;
        // If the other arm is what blocks the workspace, move it to its
        // parked pose and retry once before giving up on this loop.
        if (attempt == 0 && !parked_other) {
          bool other_blocks = false;
          Pose3 frame = element_world_frame(state.rope.elements[init.index]);
          for (const GraspPose& g : annotate_grasps(state.rope.elements[init.index])) {
            GraspFeasibility f = evaluate_grasp(arm, g, frame, scene);
            if (f.reachable && !f.collision_free &&
                f.blocking_body == BlockingBody::OtherArm) {
              other_blocks = true;
              break;
            }
          }
          if (other_blocks) {
            const ArmSpec& oa = sc.arm(other(arm_side));
            scene = make_scene(world, state, arm_side, oa.parked_hand);
            ls.failures.push_back(
                {loop, arm_side,
                 FailureCause::PlateCollisionResolvedByMovingOtherArm});
            parked_other = true;
            continue;
          }
        }
        FailureCause cause = e.code() == PlanError::MotionPlanFailed
                                 ? FailureCause::MotionPlanFailed
                                 : FailureCause::NoFeasiblePair;
        log_skip(cause, "regrip");
        ls.failures.push_back({loop, arm_side, FailureCause::ReGrip});
        break;
      }
    }
    if (!planned) {
      ls.active_arm = other(arm_side);
      continue;
    }

    // Eq. 5 / Eq. 6 guard, with the fixed conservative bootstrap length for
    // the very first pull.
    double d_exec = cmd.path_length_mm;
    size_t n_pulls = ls.d_history.size();
    std::optional<double> predicted;
    if (n_pulls == 0) {
      d_exec = std::min(d_exec, bootstrap_pull_length(arm));
    } else {
      double a_cur = ls.alpha_history.back();
      double a_prev = ls.alpha_history[ls.alpha_history.size() - 2];
      double d_prev = ls.d_history.back();
      double est = predict_tilt(a_prev, a_cur, d_prev, d_exec);
      if (est > ls.alpha_thld) {
        try {
          d_exec = std::min(
              d_exec, adjust_pull_length(ls.alpha_thld, a_cur, a_prev, d_prev));
        } catch (const PlannerError& e) {
          if (e.code() != PlanError::StalledLift) throw;
          log_skip(FailureCause::ReGrip, "regrip");
          ls.active_arm = other(arm_side);
          continue;
        }
      }
      predicted = predict_tilt(a_prev, a_cur, d_prev, d_exec);
    }
    if (d_exec <= 0.0) break;

    double planning_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    Point3 hand_end = cmd.start.position +
                      (cmd.end.position - cmd.start.position).normalized() *
                          d_exec;
    state = apply_pull(world, state, d_exec, hand_end);
    double measured = measure_tilt(state, sc.noise_sigma_angle, rng);
    ForceProxy proxy = hand_force_proxy(world, state, pair.goal.point);

    ls.alpha_history.push_back(measured);
    ls.d_history.push_back(d_exec);
    if (predicted) res.predictions.push_back({*predicted, measured});

    LiftEvent ev;
    ev.loop = loop;
    ev.arm = arm_side;
    ev.event = "pull";
    ev.cause = "success";
    ev.d_mm = d_exec;
    ev.alpha_before = alpha_before;
    ev.alpha_after = measured;
    ev.q = pair.q;
    ev.f = pair.f;
    ev.theta = pair.goal.theta;
    ev.force_proxy = proxy.rope_tension_at_hand;
    res.events.push_back(ev);

    PullRecord rec;
    rec.loop = loop;
    rec.arm = arm_side;
    rec.distance_mm = d_exec;
    rec.force_proxy = proxy.rope_tension_at_hand;
    rec.q = pair.q;
    rec.f = pair.f;
    rec.theta = pair.goal.theta;
    rec.goal = pair.goal.point;
    rec.planning_time_s = planning_s;
    res.pulls.push_back(rec);
    res.snapshots.push_back(snapshot(world, state));

    ls.active_arm = other(arm_side);
  }

  res.final_state = state;
  return res;
}

}  // namespace craneplan
