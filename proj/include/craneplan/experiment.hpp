#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "craneplan/lift_controller.hpp"
#include "craneplan/scenario_io.hpp"
#include "craneplan/sim.hpp"
#include "craneplan/tumble_planner.hpp"

namespace craneplan {

struct TumbleSummary {
  int n_instants = 0;
  int n_steps = 0;
  std::optional<int> edge_switch_index;
  int tip_index = 0;
  double max_f1 = 0.0;
  double final_rotation_deg = 0.0;
};

struct RunTotals {
  int action_count = 0;
  double avg_distance_mm = 0.0;
  double avg_force_n = 0.0;
};

struct RunReport {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::vector<PullRecord> pulls;
  TumbleSummary tumble;
  RunTotals totals;
  std::string final_phase;
  double final_tilt_from_table_deg = 0.0;
  double lift_time_s = 0.0;
  double tumble_time_s = 0.0;
  double return_time_s = 0.0;
};

struct RunOutput {
  RunReport report;
  LiftResult lift;
  TumbleTrajectory trajectory;
  SimState final_state;
};

/// Full pipeline against the simulator: lift to threshold, plan and execute
/// the tumble, return the rope. When out_dir is nonempty, writes events.csv,
/// trajectory.csv, snapshots.csv and report.json there.
RunOutput run_experiment(const Scenario& scenario, const std::string& out_dir);

std::string report_to_json(const RunReport& report);

/// Weight-ablation sweep over the lift phase: one lift per (weight, seed),
/// aggregated means plus the selected-goal scatter. Writes goals.csv,
/// runs.csv and summary.csv when out_dir is nonempty.
struct SweepCell {
  std::array<double, 3> weights;
  std::uint64_t seed = 0;
  int action_count = 0;
  double mean_distance_mm = 0.0;
  double mean_force_n = 0.0;
};

struct SweepAggregate {
  std::array<double, 3> weights;
  double mean_actions = 0.0;
  double mean_distance_mm = 0.0;
  double mean_force_n = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<SweepAggregate> aggregates;
  // One row per executed pull: weights, seed, goal x/y/z, l, theta, Q.
  struct GoalRow {
    std::array<double, 3> weights;
    std::uint64_t seed;
    ArmSide arm;
    Point3 goal;
    double l, theta, q;
  };
  std::vector<GoalRow> goals;
};

SweepResult sweep_weights(const Scenario& base,
                          const std::vector<std::array<double, 3>>& weights,
                          const std::vector<std::uint64_t>& seeds,
                          const std::string& out_dir);

/// One tumbling-ablation cell: a reference cross-section with constraint or
/// parameter overrides applied before planning.
struct AblateCell {
  std::string id;
  std::string plate;  // reference scenario name
  std::optional<double> v_max;
  std::optional<double> gamma_deg;
  std::optional<bool> enforce_speed;
  std::optional<bool> enforce_direction;
  std::optional<double> mu1;
  std::optional<double> f1_sq_max;
  std::string rg_variant = "center";   // center | quarter
  std::string rh_variant = "topleft";  // topleft | topright
};

struct AblateMetrics {
  std::string id;
  double oscillation = 0.0;
  double max_spacing_mm = 0.0;
  double mean_push_height_second_half_mm = 0.0;
  int n_instants = 0;
  std::optional<int> edge_switch_index;
  double tip_rotation_deg = 0.0;
  TumbleTrajectory trajectory;
};

std::vector<AblateCell> parse_ablate_matrix(const std::string& json_text);

std::vector<AblateMetrics> ablate_tumble(const std::vector<AblateCell>& cells,
                                         const std::string& out_dir);

/// Apply a cell's plate variants to a scenario.
Scenario apply_ablate_cell(const AblateCell& cell);

void write_trajectory_csv(const TumbleTrajectory& traj,
                          const std::string& path);

void write_events_csv(const std::vector<LiftEvent>& events,
                      const std::string& path);

void write_snapshots_csv(const std::vector<SimSnapshot>& snaps,
                         const std::string& path);

}  // namespace craneplan
