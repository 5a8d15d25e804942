#include "craneplan/experiment.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "craneplan/csv.hpp"
#include "craneplan/errors.hpp"
#include "craneplan/rope_return.hpp"
#include "json.hpp"

namespace craneplan {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

RunTotals compute_totals(const std::vector<PullRecord>& pulls) {
  RunTotals t;
  t.action_count = (int)pulls.size();
  for (const PullRecord& p : pulls) {
    t.avg_distance_mm += p.distance_mm;
    t.avg_force_n += p.force_proxy;
  }
  if (!pulls.empty()) {
    t.avg_distance_mm /= pulls.size();
    t.avg_force_n /= pulls.size();
  }
  return t;
}

}  // namespace

void write_events_csv(const std::vector<LiftEvent>& events,
                      const std::string& path) {
  CsvWriter w(path, {"loop", "arm", "event", "cause", "d_mm",
                     "alpha_before_deg", "alpha_after_deg", "Q", "f_length",
                     "f_load", "f_grasps", "theta_deg", "force_proxy_N"});
  for (const LiftEvent& e : events) {
    w.field(e.loop)
        .field(to_string(e.arm))
        .field(e.event)
        .field(e.cause)
        .field(e.d_mm)
        .field(rad2deg(e.alpha_before))
        .field(rad2deg(e.alpha_after))
        .field(e.q)
        .field(e.f.f_length)
        .field(e.f.f_load)
        .field(e.f.f_grasps)
        .field(rad2deg(e.theta))
        .field(e.force_proxy);
    w.end_row();
  }
}

void write_trajectory_csv(const TumbleTrajectory& traj,
                          const std::string& path) {
  CsvWriter w(path, {"t_s", "state", "rotation_deg", "p1_x_mm", "p1_y_mm",
                     "F0_N", "F1_N", "T_N", "objective", "edge"});
  for (const PushStep& s : traj.steps) {
    w.field(s.t)
        .field(to_string(s.state_kind))
        .field(rad2deg(s.plate_rotation))
        .field(s.push_point.x)
        .field(s.push_point.y)
        .field(s.F0.norm())
        .field(s.F1.norm())
        .field(s.T.norm())
        .field(s.objective_value)
        .field(s.active_edge);
    w.end_row();
  }
}

void write_snapshots_csv(const std::vector<SimSnapshot>& snaps,
                         const std::string& path) {
  CsvWriter w(path, {"phase", "tilt_deg", "pulled_total_mm", "hook_height_mm"});
  for (const SimSnapshot& s : snaps) {
    w.field(to_string(s.phase))
        .field(s.tilt_deg)
        .field(s.pulled_total_mm)
        .field(s.hook_height_mm);
    w.end_row();
  }
}

std::string report_to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["scenario_id"] = r.scenario_id;
  j["seed"] = r.seed;
  j["final_phase"] = r.final_phase;
  j["final_tilt_from_table_deg"] = r.final_tilt_from_table_deg;
  nlohmann::ordered_json pulls = nlohmann::ordered_json::array();
  for (const PullRecord& p : r.pulls) {
    nlohmann::ordered_json row;
    row["loop"] = p.loop;
    row["arm"] = to_string(p.arm);
    row["distance_mm"] = p.distance_mm;
    row["force_proxy_N"] = p.force_proxy;
    row["Q"] = p.q;
    row["f_length"] = p.f.f_length;
    row["f_load"] = p.f.f_load;
    row["f_grasps"] = p.f.f_grasps;
    row["theta_deg"] = rad2deg(p.theta);
    row["goal_mm"] = {p.goal.x, p.goal.y, p.goal.z};
    row["planning_time_s"] = p.planning_time_s;
    pulls.push_back(row);
  }
  j["pulls"] = pulls;
  nlohmann::ordered_json t;
  t["n_instants"] = r.tumble.n_instants;
  t["n_steps"] = r.tumble.n_steps;
  if (r.tumble.edge_switch_index)
    t["edge_switch_index"] = *r.tumble.edge_switch_index;
  else
    t["edge_switch_index"] = nullptr;
  t["tip_index"] = r.tumble.tip_index;
  t["max_F1_N"] = r.tumble.max_f1;
  t["final_rotation_deg"] = r.tumble.final_rotation_deg;
  j["tumble"] = t;
  nlohmann::ordered_json totals;
  totals["action_count"] = r.totals.action_count;
  totals["avg_distance_mm"] = r.totals.avg_distance_mm;
  totals["avg_force_N"] = r.totals.avg_force_n;
  j["totals"] = totals;
  nlohmann::ordered_json timing;
  timing["lift_s"] = r.lift_time_s;
  timing["tumble_s"] = r.tumble_time_s;
  timing["return_s"] = r.return_time_s;
  j["timing"] = timing;
  return j.dump(2) + "\n";
}

RunOutput run_experiment(const Scenario& scenario, const std::string& out_dir) {
  RunOutput out;
  SimWorld world = SimWorld::from_scenario(scenario);
  SimState state = initial_state(world);
  Rng rng(scenario.rng_seed);

  auto t0 = Clock::now();
  out.lift = run_lift_loop(world, state, rng);
  state = out.lift.final_state;
  out.report.lift_time_s = seconds_since(t0);

  // Tumble: plan from the threshold pose, check arm reach, then walk the
  // simulator through the instants (the pose advances once per t_i).
  t0 = Clock::now();
  state = begin_tumbling(world, state);
  Vec2 pin2{scenario.rope.pin_point.x, scenario.rope.pin_point.z};
  TumbleTrajectory traj =
      plan_tumble(scenario.plate, world.edges, pin2, scenario.tumble,
                  state.plate_tilt);
  traj = check_kinematics_and_repair(traj, scenario.plate, world.edges, pin2,
                                     scenario.tumble, scenario.right_arm,
                                     scenario.table_height_mm);
  double last_t = -1.0;
  for (const PushStep& stp : traj.steps) {
    if (stp.t == last_t) continue;
    last_t = stp.t;
    state = apply_tumble_step(world, state, stp);
    out.lift.snapshots.push_back(snapshot(world, state));
  }
  out.report.tumble_time_s = seconds_since(t0);
  out.trajectory = traj;

  // Past the tip the plate leans on the rope; both arms feed it back until
  // the plate lies flat on the other face.
  t0 = Clock::now();
  state = begin_returning(world, state);
  for (const PullCommand& cmd : plan_rope_return(world, state)) {
    state = apply_return(world, state, cmd.path_length_mm);
    out.lift.snapshots.push_back(snapshot(world, state));
  }
  if (state.phase != SimPhase::Done && tilt_from_table(state) <= deg2rad(1.0))
    state.phase = SimPhase::Done;
  out.report.return_time_s = seconds_since(t0);
  out.final_state = state;

  RunReport& rep = out.report;
  rep.scenario_id = scenario.id;
  rep.seed = scenario.rng_seed;
  rep.pulls = out.lift.pulls;
  rep.totals = compute_totals(rep.pulls);
  rep.tumble.n_instants = traj.n_instants;
  rep.tumble.n_steps = (int)traj.steps.size();
  rep.tumble.edge_switch_index = traj.edge_switch_index;
  rep.tumble.tip_index = traj.tip_index;
  for (const PushStep& s : traj.steps)
    rep.tumble.max_f1 = std::max(rep.tumble.max_f1, s.F1.norm());
  if (!traj.steps.empty())
    rep.tumble.final_rotation_deg =
        rad2deg(traj.steps.back().plate_rotation);
  rep.final_phase = to_string(state.phase);
  rep.final_tilt_from_table_deg = rad2deg(tilt_from_table(state));

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_events_csv(out.lift.events, out_dir + "/events.csv");
    write_trajectory_csv(traj, out_dir + "/trajectory.csv");
    write_snapshots_csv(out.lift.snapshots, out_dir + "/snapshots.csv");
    std::ofstream rep_out(out_dir + "/report.json", std::ios::binary);
    rep_out << report_to_json(rep);
  }
  return out;
}

SweepResult sweep_weights(const Scenario& base,
                          const std::vector<std::array<double, 3>>& weights,
                          const std::vector<std::uint64_t>& seeds,
                          const std::string& out_dir) {
  SweepResult res;
  for (const auto& w : weights) {
    SweepAggregate agg;
    agg.weights = w;
    for (std::uint64_t seed : seeds) {
      Scenario sc = base;
      sc.quality_weights = w;
      sc.rng_seed = seed;
      SimWorld world = SimWorld::from_scenario(sc);
      Rng rng(seed);
      LiftResult lift = run_lift_loop(world, initial_state(world), rng);

      SweepCell cell;
      cell.weights = w;
      cell.seed = seed;
      cell.action_count = (int)lift.pulls.size();
      for (const PullRecord& p : lift.pulls) {
        cell.mean_distance_mm += p.distance_mm;
        cell.mean_force_n += p.force_proxy;
        res.goals.push_back(
            {w, seed, p.arm, p.goal, (p.goal - sc.rope.pin_point).norm(),
             p.theta, p.q});
      }
      if (!lift.pulls.empty()) {
        cell.mean_distance_mm /= lift.pulls.size();
        cell.mean_force_n /= lift.pulls.size();
      }
      res.cells.push_back(cell);
      agg.mean_actions += cell.action_count;
      agg.mean_distance_mm += cell.mean_distance_mm;
      agg.mean_force_n += cell.mean_force_n;
    }
    agg.mean_actions /= seeds.size();
    agg.mean_distance_mm /= seeds.size();
    agg.mean_force_n /= seeds.size();
    res.aggregates.push_back(agg);
  }

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    {
      CsvWriter w(out_dir + "/goals.csv",
                  {"w_length", "w_load", "w_grasps", "seed", "arm", "x_mm",
                   "y_mm", "z_mm", "l_mm", "theta_deg", "Q"});
      for (const auto& g : res.goals) {
        w.field(g.weights[0])
            .field(g.weights[1])
            .field(g.weights[2])
            .field((size_t)g.seed)
            .field(to_string(g.arm))
            .field(g.goal.x)
            .field(g.goal.y)
            .field(g.goal.z)
            .field(g.l)
            .field(rad2deg(g.theta))
            .field(g.q);
        w.end_row();
      }
    }
    {
      CsvWriter w(out_dir + "/runs.csv",
                  {"w_length", "w_load", "w_grasps", "seed", "actions",
                   "mean_distance_mm", "mean_force_N"});
      for (const SweepCell& c : res.cells) {
        w.field(c.weights[0])
            .field(c.weights[1])
            .field(c.weights[2])
            .field((size_t)c.seed)
            .field(c.action_count)
            .field(c.mean_distance_mm)
            .field(c.mean_force_n);
        w.end_row();
      }
    }
    {
      CsvWriter w(out_dir + "/summary.csv",
                  {"w_length", "w_load", "w_grasps", "mean_actions",
                   "mean_distance_mm", "mean_force_N"});
      for (const SweepAggregate& a : res.aggregates) {
        w.field(a.weights[0])
            .field(a.weights[1])
            .field(a.weights[2])
            .field(a.mean_actions)
            .field(a.mean_distance_mm)
            .field(a.mean_force_n);
        w.end_row();
      }
    }
  }
  return res;
}

Scenario apply_ablate_cell(const AblateCell& cell) {
  Scenario sc = make_reference_scenario(cell.plate);
  PlateSpec& p = sc.plate;
  if (cell.mu1) p.mu1 = *cell.mu1;
  if (cell.rg_variant == "quarter") {
    // Center of mass shifted toward the pivot-side quarter of the plate.
    p.com_offset_mm = {0.75 * p.height_mm, 0.25 * p.width_mm};
  }
  if (cell.rh_variant == "topright") {
    p.hook_offset_mm = {p.height_mm, p.width_mm};
  }
  TumbleParams& t = sc.tumble;
  if (cell.v_max) t.v_max = *cell.v_max;
  if (cell.gamma_deg) t.gamma = deg2rad(*cell.gamma_deg);
  if (cell.enforce_speed) t.enforce_speed = *cell.enforce_speed;
  if (cell.enforce_direction) t.enforce_direction = *cell.enforce_direction;
  if (cell.f1_sq_max) t.f1_sq_max = *cell.f1_sq_max;
  return sc;
}

std::vector<AblateCell> parse_ablate_matrix(const std::string& json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text);
  std::vector<AblateCell> cells;
  for (const auto& row : doc.at("cells")) {
    AblateCell c;
    c.id = row.at("id").get<std::string>();
    c.plate = row.at("plate").get<std::string>();
    if (row.contains("v_max")) c.v_max = row["v_max"].get<double>();
    if (row.contains("gamma_deg")) c.gamma_deg = row["gamma_deg"].get<double>();
    if (row.contains("enforce_speed"))
      c.enforce_speed = row["enforce_speed"].get<bool>();
    if (row.contains("enforce_direction"))
      c.enforce_direction = row["enforce_direction"].get<bool>();
    if (row.contains("mu1")) c.mu1 = row["mu1"].get<double>();
    if (row.contains("f1_sq_max"))
      c.f1_sq_max = row["f1_sq_max"].get<double>();
    if (row.contains("rg_variant"))
      c.rg_variant = row["rg_variant"].get<std::string>();
    if (row.contains("rh_variant"))
      c.rh_variant = row["rh_variant"].get<std::string>();
    cells.push_back(c);
  }
  return cells;
}

std::vector<AblateMetrics> ablate_tumble(const std::vector<AblateCell>& cells,
                                         const std::string& out_dir) {
  std::vector<AblateMetrics> out;
  if (!out_dir.empty()) fs::create_directories(out_dir);
  for (const AblateCell& cell : cells) {
    Scenario sc = apply_ablate_cell(cell);
    SimWorld world = SimWorld::from_scenario(sc);
    Vec2 pin2{sc.rope.pin_point.x, sc.rope.pin_point.z};
    TumbleTrajectory traj = plan_tumble(sc.plate, world.edges, pin2, sc.tumble,
                                        sc.alpha_thld);
    AblateMetrics m;
    m.id = cell.id;
    m.oscillation = oscillation_metric(traj);
    m.max_spacing_mm = max_adjacent_spacing(traj);
    m.mean_push_height_second_half_mm = mean_push_height_second_half(traj);
    m.n_instants = traj.n_instants;
    m.edge_switch_index = traj.edge_switch_index;
    if (!traj.steps.empty())
      m.tip_rotation_deg = rad2deg(traj.steps.back().plate_rotation);
    m.trajectory = traj;
    if (!out_dir.empty())
      write_trajectory_csv(traj, out_dir + "/trajectory_" + cell.id + ".csv");
    out.push_back(std::move(m));
  }
  if (!out_dir.empty()) {
    CsvWriter w(out_dir + "/metrics.csv",
                {"id", "oscillation_rad", "max_spacing_mm",
                 "mean_push_height_2nd_half_mm", "n_instants",
                 "edge_switch_index", "tip_rotation_deg"});
    for (const AblateMetrics& m : out) {
      w.field(m.id)
          .field(m.oscillation)
          .field(m.max_spacing_mm)
          .field(m.mean_push_height_second_half_mm)
          .field(m.n_instants)
          .field(m.edge_switch_index ? std::to_string(*m.edge_switch_index)
                                     : std::string("none"))
          .field(m.tip_rotation_deg);
      w.end_row();
    }
  }
  return out;
}

}  // namespace craneplan
