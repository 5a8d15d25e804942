#include "craneplan/tumble_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "craneplan/errors.hpp"

namespace craneplan {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTorqueTol = 1e-6;  // N*mm, zero-moment detection
}  // namespace

InstantGeometry instant_geometry(double rotation, const PlateSpec& plate,
                                 const EdgeContactModel& edges,
                                 const Vec2& pin_planar) {
  InstantGeometry g;
  g.rotation = rotation;
  g.active_edge = rotation < edges.switch_angle ? 0 : 1;
  if (g.active_edge == 0) {
    g.pivot = edges.first_edge;
    g.face_dir = rotate_cw({-1.0, 0.0}, rotation);
    g.face_normal = rotate_cw({0.0, 1.0}, rotation);
    g.face_len = plate.height_mm;
  } else {
    g.pivot = edges.second_edge;
    g.face_dir = rotate_cw({0.0, -1.0}, rotation);
    g.face_normal = rotate_cw({-1.0, 0.0}, rotation);
    g.face_len = plate.width_mm;
  }
  g.hook = cross_section_point(rotation, plate, edges, plate.hook_offset_mm);
  g.com = cross_section_point(rotation, plate, edges, plate.com_offset_mm);
  g.rope_dir = (pin_planar - g.hook).normalized();
  g.weight = plate.weight_newton();
  g.mu0 = plate.mu0;
  g.mu1 = plate.mu1;
  Vec2 gravity{0.0, -g.weight};
  g.tau_g = (g.com - g.pivot).cross(gravity);
  g.c_t = (g.hook - g.pivot).cross(g.rope_dir);
  return g;
}

namespace {

struct Interval {
  double lo = 0.0;
  double hi = kInf;
  bool empty() const { return lo > hi; }

  /// Intersect with { t : a + b t >= 0 }.
  void clip_ge(double a, double b) {
    if (std::abs(b) < 1e-15) {
      if (a < 0.0) {
        lo = 1.0;
        hi = 0.0;
      }
      return;
    }
    double t = -a / b;
    if (b > 0.0)
      lo = std::max(lo, t);
    else
      hi = std::min(hi, t);
  }
};

struct BetaBand {
  double lo = 0.0;
  double hi = 0.0;
  bool valid() const { return hi > lo; }
};

BetaBand friction_band(double mu1, double angle_margin) {
  double a = std::atan(1.0 / mu1);
  return {a + angle_margin, kPi - a - angle_margin};
}

/// Exact force solve for fixed (s, beta): the torque equality makes |F1|
/// linear in T, the force balance makes F0 affine in T, and the objective
/// becomes a 1-D quadratic clamped to the constraint interval.
InnerSolution solve_fixed_beta(const InstantGeometry& g,
                               const TumbleParams& params, PushStateKind kind,
                               double s, double beta,
                               const SolverMargins& m) {
  InnerSolution sol;
  double sb = std::sin(beta);
  if (sb <= 1e-12 || s <= 0.0) return sol;

  Vec2 f1_dir = g.face_dir * std::cos(beta) + g.face_normal * sb;
  double mag0 = g.tau_g / (s * sb);
  double magT = g.c_t / (s * sb);

  double mag_lo = std::sqrt(m.f1_sq_min);
  double mag_hi = std::sqrt(std::max(0.0, params.f1_sq_max - m.f1_sq_min));
  if (mag_hi <= mag_lo) return sol;

  // F0(T) = A + B T from the force balance F0 = -(G + T t + F1).
  Vec2 A = Vec2{0.0, g.weight} - f1_dir * mag0;
  Vec2 B = -g.rope_dir - f1_dir * magT;

  Interval t_range;
  if (kind == PushStateKind::SPrime) t_range.hi = 0.0;
  t_range.clip_ge(mag0 - mag_lo, magT);
  t_range.clip_ge(mag_hi - mag0, -magT);
  t_range.clip_ge(A.y - m.force, B.y);    // f0 normal support
  t_range.clip_ge(-A.x - m.force, -B.x);  // f0 tangential, opposing the push
  // Table friction cone: f0t <= mu0 f0n - margin, with f0t = -F0.x.
  t_range.clip_ge(g.mu0 * A.y + A.x - m.force, g.mu0 * B.y + B.x);
  if (t_range.empty()) return sol;

  double c2 = params.k1 * B.dot(B) + params.k2 * magT * magT + params.k3;
  double c1 = 2.0 * params.k1 * A.dot(B) + 2.0 * params.k2 * mag0 * magT;
  double t_star = c2 > 1e-15 ? -c1 / (2.0 * c2) : t_range.lo;
  double T = std::clamp(t_star, t_range.lo, t_range.hi);

  double mag = mag0 + magT * T;
  Vec2 F1 = f1_dir * mag;
  Vec2 F0 = A + B * T;
  sol.feasible = true;
  sol.tension = T;
  sol.f1_mag = mag;
  sol.beta = beta;
  sol.f0 = F0;
  sol.f1 = F1;
  sol.t_vec = g.rope_dir * T;
  sol.objective = params.k1 * F0.dot(F0) + params.k2 * F1.dot(F1) +
                  params.k3 * T * T;
  return sol;
}

}  // namespace

InnerSolution solve_at_s(const InstantGeometry& g, const TumbleParams& params,
                         PushStateKind kind, double s,
                         const SolverMargins& m) {
  BetaBand band = friction_band(g.mu1, m.angle);
  InnerSolution best;
  if (!band.valid()) return best;

  const int n = 96;
  int best_i = -1;
  for (int i = 0; i <= n; ++i) {
    double beta = band.lo + (band.hi - band.lo) * i / n;
    InnerSolution c = solve_fixed_beta(g, params, kind, s, beta, m);
    if (c.feasible && (!best.feasible || c.objective < best.objective)) {
      best = c;
      best_i = i;
    }
  }
  if (best_i < 0) return best;

  // Golden-section refinement inside the winning cell's neighbourhood.
  double lo = band.lo + (band.hi - band.lo) * std::max(0, best_i - 1) / n;
  double hi = band.lo + (band.hi - band.lo) * std::min(n, best_i + 1) / n;
  auto value = [&](double beta) {
    InnerSolution c = solve_fixed_beta(g, params, kind, s, beta, m);
    return c.feasible ? c.objective : kInf;
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = value(x1), f2 = value(x2);
  for (int it = 0; it < 60 && (hi - lo) > 1e-10; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = value(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = value(x2);
    }
  }
  InnerSolution refined =
      solve_fixed_beta(g, params, kind, s, 0.5 * (lo + hi), m);
  if (refined.feasible && refined.objective < best.objective) best = refined;
  return best;
}

namespace {

std::vector<double> face_s_grid(const InstantGeometry& g,
                                const SolverMargins& m) {
  const double L = g.face_len;
  std::vector<double> grid;
  const int n_base = 48;
  for (int k = 0; k < n_base; ++k) grid.push_back(L * (k + 1) / n_base);
  // Cluster near the corner the chain has to round at the edge switch:
  // s -> 0 on the first face, s -> L on the second.
  const double cluster[] = {0.02, 0.05, 0.1,  0.2,  0.4,  0.8, 1.5,
                            2.5,  4.0,  6.0,  9.0,  13.0, 18.0, 25.0};
  for (double c : cluster) {
    if (c >= L) continue;
    grid.push_back(g.active_edge == 0 ? c : L - c);
  }
  for (double& s : grid) s = std::clamp(s, m.s_min, L);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             grid.end());
  return grid;
}

PushStep make_step(const InstantGeometry& g, const InnerSolution& sol,
                   PushStateKind kind, double s, double t) {
  PushStep st;
  st.t = t;
  st.plate_rotation = g.rotation;
  st.rotation_center = g.pivot;
  st.push_point = g.pivot + g.face_dir * s;
  st.r1 = g.face_dir * s;
  st.r_t = g.hook - g.pivot;
  st.r_g = g.com - g.pivot;
  st.F0 = sol.f0;
  st.F1 = sol.f1;
  st.T = sol.t_vec;
  st.state_kind = kind;
  st.objective_value = sol.objective;
  st.active_edge = g.active_edge;
  st.s_on_face = s;
  return st;
}

bool turn_ok(const Vec2& a, const Vec2& b, const Vec2& c, double gamma) {
  Vec2 d1 = b - a;
  Vec2 d2 = c - b;
  if (d1.norm() < kDirectionEpsilonMm || d2.norm() < kDirectionEpsilonMm)
    return true;
  double cosv = d1.normalized().dot(d2.normalized());
  return std::acos(std::clamp(cosv, -1.0, 1.0)) <= gamma + 1e-12;
}

}  // namespace

PushStep solve_push_instant(const InstantSpec& spec, const PlateSpec& plate,
                            const EdgeContactModel& edges,
                            const Vec2& pin_planar, const TumbleParams& params,
                            const PushStep* prev, const PushStep* prev_prev) {
  SolverMargins m;
  InstantGeometry g = instant_geometry(spec.rotation, plate, edges, pin_planar);

  // Zero-moment pose in a loosened state: the plate balances on the edge
  // with no push at all. This is the stop condition of the tumble.
  if (spec.kind == PushStateKind::SPrime && std::abs(g.tau_g) <= kTorqueTol) {
    InnerSolution sol;
    sol.feasible = true;
    sol.f0 = {0.0, g.weight};
    sol.objective = params.k1 * g.weight * g.weight;
    return make_step(g, sol, spec.kind, g.face_len, spec.t);
  }

  double bound7h = params.enforce_speed && prev ? params.v_max * spec.dt : kInf;

  double best_obj = kInf;
  double best_s = -1.0;
  InnerSolution best_sol;
  auto consider = [&](double s) {
    if (s < m.s_min || s > g.face_len) return;
    Vec2 p1 = g.pivot + g.face_dir * s;
    if (prev && (p1 - prev->push_point).norm() > bound7h + 1e-12) return;
    if (params.enforce_direction && prev && prev_prev &&
        !turn_ok(prev_prev->push_point, prev->push_point, p1, params.gamma))
      return;
    InnerSolution sol = solve_at_s(g, params, spec.kind, s, m);
    if (!sol.feasible) return;
    if (sol.objective < best_obj - 1e-15 ||
        (std::abs(sol.objective - best_obj) <= 1e-15 && s > best_s)) {
      best_obj = sol.objective;
      best_s = s;
      best_sol = sol;
    }
  };

  std::vector<double> grid = face_s_grid(g, m);
  for (double s : grid) consider(s);
  if (best_s < 0.0)
    throw PlannerError(PlanError::InfeasibleInstant,
                       "no admissible pushing state at rotation " +
                           std::to_string(rad2deg(spec.rotation)) + " deg");

  // Local refinement of s around the winner.
  double span = g.face_len / 48.0;
  for (double step = span / 2.0; step > 1e-7; step /= 2.0) {
    consider(best_s - step);
    consider(best_s + step);
  }
  return make_step(g, best_sol, spec.kind, best_s, spec.t);
}

namespace {

struct InstantData {
  InstantGeometry geom;
  bool pairable = false;
  std::vector<double> s_grid;
  std::vector<Vec2> p1;
  std::vector<double> cost;
  std::vector<char> ok;
  std::vector<InnerSolution> sol_s;
  std::vector<InnerSolution> sol_sp;
};

InstantData build_instant(const PlateSpec& plate, const EdgeContactModel& edges,
                          const Vec2& pin, const TumbleParams& params,
                          double rotation, const SolverMargins& m) {
  InstantData d;
  d.geom = instant_geometry(rotation, plate, edges, pin);
  d.s_grid = face_s_grid(d.geom, m);
  size_t n = d.s_grid.size();
  d.p1.resize(n);
  d.cost.assign(n, kInf);
  d.ok.assign(n, 0);
  d.sol_s.resize(n);
  d.sol_sp.resize(n);

  std::vector<InnerSolution> sp(n);
  bool any_sp = false;
  for (size_t i = 0; i < n; ++i) {
    sp[i] = solve_at_s(d.geom, params, PushStateKind::SPrime, d.s_grid[i], m);
    any_sp = any_sp || sp[i].feasible;
  }
  d.pairable = any_sp;

  for (size_t i = 0; i < n; ++i) {
    d.p1[i] = d.geom.pivot + d.geom.face_dir * d.s_grid[i];
    InnerSolution s_state =
        solve_at_s(d.geom, params, PushStateKind::S, d.s_grid[i], m);
    if (!s_state.feasible) continue;
    if (d.pairable) {
      if (!sp[i].feasible) continue;
      d.cost[i] = s_state.objective + sp[i].objective;
      d.sol_sp[i] = sp[i];
    } else {
      d.cost[i] = s_state.objective;
    }
    d.sol_s[i] = s_state;
    d.ok[i] = 1;
  }
  return d;
}

}  // namespace

TumbleTrajectory plan_tumble(const PlateSpec& plate,
                             const EdgeContactModel& edges,
                             const Vec2& pin_planar, const TumbleParams& params,
                             double start_rotation) {
  SolverMargins m;
  double tip_thru = tip_through_angle(plate, edges);
  if (start_rotation >= tip_thru - 1e-9)
    throw PlannerError(PlanError::InfeasibleInstant,
                       "start rotation already past the tip-through pose");

  int n = params.n_steps;
  double delta = (tip_thru - start_rotation) / n;
  double diag = std::hypot(plate.height_mm, plate.width_mm);
  double dt = params.dt > 0.0 ? params.dt : delta * diag / params.v_max;
  double bound7h = params.enforce_speed ? params.v_max * dt : kInf;

  std::vector<InstantData> inst;
  inst.reserve(n);
  for (int i = 0; i < n; ++i) {
    double rot = start_rotation + i * delta;
    InstantData d = build_instant(plate, edges, pin_planar, params, rot, m);
    bool any = false;
    for (char v : d.ok) any = any || v;
    if (!any)
      throw PlannerError(PlanError::InfeasibleInstant,
                         "no admissible pushing state at rotation " +
                             std::to_string(rad2deg(rot)) + " deg");
    inst.push_back(std::move(d));
  }

  // Chain search over the pushing-point grid. States are (prev s, cur s)
  // pairs so the direction constraint sees both legs of every turn.
  const int M = (int)inst.size();
  std::vector<std::vector<double>> pair_cost(M);
  std::vector<std::vector<int>> parent(M);

  auto pair_index = [&](int i, size_t a, size_t b) {
    return a * inst[i].s_grid.size() + b;
  };

  if (M == 1) {
    // Degenerate single-instant plan handled by the extraction below.
  }

  size_t n0 = inst[0].s_grid.size();
  std::vector<double> first_cost(n0, kInf);
  for (size_t i = 0; i < n0; ++i)
    if (inst[0].ok[i]) first_cost[i] = inst[0].cost[i];

  if (M >= 2) {
    size_t n1 = inst[1].s_grid.size();
    pair_cost[1].assign(n0 * n1, kInf);
    parent[1].assign(n0 * n1, -1);
    for (size_t a = 0; a < n0; ++a) {
      if (first_cost[a] == kInf) continue;
      for (size_t b = 0; b < n1; ++b) {
        if (!inst[1].ok[b]) continue;
        if ((inst[1].p1[b] - inst[0].p1[a]).norm() > bound7h + 1e-12) continue;
        double c = first_cost[a] + inst[1].cost[b];
        size_t idx = pair_index(1, a, b);
        if (c < pair_cost[1][idx]) {
          pair_cost[1][idx] = c;
          parent[1][idx] = 0;
        }
      }
    }
  }

  for (int j = 2; j < M; ++j) {
    size_t np = inst[j - 1].s_grid.size();
    size_t npp = inst[j - 2].s_grid.size();
    size_t nc = inst[j].s_grid.size();
    pair_cost[j].assign(np * nc, kInf);
    parent[j].assign(np * nc, -1);
    for (size_t b = 0; b < np; ++b) {
      if (!inst[j - 1].ok[b]) continue;
      for (size_t c = 0; c < nc; ++c) {
        if (!inst[j].ok[c]) continue;
        if ((inst[j].p1[c] - inst[j - 1].p1[b]).norm() > bound7h + 1e-12)
          continue;
        double best = kInf;
        int best_a = -1;
        for (size_t a = 0; a < npp; ++a) {
          double w = pair_cost[j - 1][pair_index(j - 1, a, b)];
          if (w == kInf) continue;
          if (params.enforce_direction &&
              !turn_ok(inst[j - 2].p1[a], inst[j - 1].p1[b], inst[j].p1[c],
                       params.gamma))
            continue;
          if (w < best) {
            best = w;
            best_a = (int)a;
          }
        }
        if (best_a >= 0) {
          size_t idx = pair_index(j, b, c);
          pair_cost[j][idx] = best + inst[j].cost[c];
          parent[j][idx] = best_a;
        }
      }
    }
  }

  // Backtrack the best chain; ties prefer the larger final s.
  std::vector<size_t> path(M);
  if (M == 1) {
    double best = kInf;
    int best_i = -1;
    for (int i = (int)n0 - 1; i >= 0; --i)
      if (first_cost[i] < best) {
        best = first_cost[i];
        best_i = i;
      }
    if (best_i < 0)
      throw PlannerError(PlanError::InfeasibleInstant,
                         "no feasible chain through the tumble span");
    path[0] = (size_t)best_i;
  } else {
    double best = kInf;
    int best_b = -1, best_c = -1;
    size_t np = inst[M - 2].s_grid.size();
    size_t nc = inst[M - 1].s_grid.size();
    for (int c = (int)nc - 1; c >= 0; --c) {
      for (int b = (int)np - 1; b >= 0; --b) {
        double w = pair_cost[M - 1][pair_index(M - 1, b, c)];
        if (w < best) {
          best = w;
          best_b = b;
          best_c = c;
        }
      }
    }
    if (best_c < 0)
      throw PlannerError(
          PlanError::InfeasibleInstant,
          "speed/direction chaining admits no pushing-point path");
    path[M - 1] = (size_t)best_c;
    path[M - 2] = (size_t)best_b;
    for (int j = M - 1; j >= 2; --j) {
      int a = parent[j][pair_index(j, path[j - 1], path[j])];
      path[j - 2] = (size_t)a;
    }
  }

  TumbleTrajectory traj;
  traj.n_instants = M;
  traj.dt = dt;
  traj.rotation_step = delta;
  traj.start_rotation = start_rotation;
  traj.tip_index = M - 1;
  for (int j = 0; j < M; ++j) {
    const InstantData& d = inst[j];
    size_t i = path[j];
    double t = j * dt;
    traj.steps.push_back(
        make_step(d.geom, d.sol_s[i], PushStateKind::S, d.s_grid[i], t));
    if (d.pairable) {
      traj.steps.push_back(make_step(d.geom, d.sol_sp[i], PushStateKind::SPrime,
                                     d.s_grid[i], t));
    }
    if (!traj.edge_switch_index && d.geom.active_edge == 1)
      traj.edge_switch_index = j;
  }
  return traj;
}

std::vector<Vec2> instant_push_points(const TumbleTrajectory& traj) {
  std::vector<Vec2> pts;
  double last_t = -1.0;
  for (const PushStep& s : traj.steps) {
    if (pts.empty() || s.t != last_t) {
      pts.push_back(s.push_point);
      last_t = s.t;
    }
  }
  return pts;
}

double oscillation_metric(const TumbleTrajectory& traj) {
  std::vector<Vec2> pts = instant_push_points(traj);
  double total = 0.0;
  bool have_dir = false;
  Vec2 dir;
  for (size_t i = 1; i < pts.size(); ++i) {
    Vec2 d = pts[i] - pts[i - 1];
    if (d.norm() < kDirectionEpsilonMm) continue;
    Vec2 nd = d.normalized();
    if (have_dir) {
      double cosv = std::clamp(dir.dot(nd), -1.0, 1.0);
      total += std::acos(cosv);
    }
    dir = nd;
    have_dir = true;
  }
  return total;
}

double max_adjacent_spacing(const TumbleTrajectory& traj) {
  std::vector<Vec2> pts = instant_push_points(traj);
  double mx = 0.0;
  for (size_t i = 1; i < pts.size(); ++i)
    mx = std::max(mx, (pts[i] - pts[i - 1]).norm());
  return mx;
}

double mean_push_height_second_half(const TumbleTrajectory& traj) {
  std::vector<Vec2> pts = instant_push_points(traj);
  if (pts.empty()) return 0.0;
  size_t from = pts.size() / 2;
  double sum = 0.0;
  size_t n = 0;
  for (size_t i = from; i < pts.size(); ++i) {
    sum += pts[i].y;
    ++n;
  }
  return n ? sum / n : 0.0;
}

TumbleTrajectory check_kinematics_and_repair(const TumbleTrajectory& traj,
                                             const PlateSpec& plate,
                                             const EdgeContactModel& edges,
                                             const Vec2& pin_planar,
                                             const TumbleParams& params,
                                             const ArmSpec& arm,
                                             double table_z) {
  SolverMargins m;
  auto reachable = [&](const Vec2& p) {
    if (p.y < table_z) return false;
    Vec3 p3{p.x, 0.0, p.y};
    double d = (p3 - arm.shoulder).norm();
    return d >= arm.reach_min_mm && d <= arm.reach_max_mm;
  };

  TumbleTrajectory out = traj;
  // Work per instant; steps at the same t share their pushing point.
  std::vector<size_t> instant_first;
  double last_t = -1.0;
  for (size_t k = 0; k < out.steps.size(); ++k) {
    if (out.steps[k].t != last_t) {
      instant_first.push_back(k);
      last_t = out.steps[k].t;
    }
  }
  double bound7h = params.enforce_speed ? params.v_max * out.dt : kInf;

  for (size_t ii = 0; ii < instant_first.size(); ++ii) {
    size_t k = instant_first[ii];
    const double t_val = out.steps[k].t;
    const double rot_val = out.steps[k].plate_rotation;
    if (reachable(out.steps[k].push_point)) continue;

    InstantGeometry g = instant_geometry(rot_val, plate, edges, pin_planar);
    double failed_s = out.steps[k].s_on_face;
    double exclusion = 0.1 * g.face_len;

    const Vec2* prev_p =
        ii > 0 ? &out.steps[instant_first[ii - 1]].push_point : nullptr;
    const Vec2* next_p = ii + 1 < instant_first.size()
                             ? &out.steps[instant_first[ii + 1]].push_point
                             : nullptr;

    double best_obj = kInf;
    double best_s = -1.0;
    InnerSolution best_sol;
    for (double s : face_s_grid(g, m)) {
      if (std::abs(s - failed_s) <= exclusion) continue;
      Vec2 p1 = g.pivot + g.face_dir * s;
      if (!reachable(p1)) continue;
      if (prev_p && (p1 - *prev_p).norm() > bound7h + 1e-12) continue;
      if (next_p && (*next_p - p1).norm() > bound7h + 1e-12) continue;
      InnerSolution sol = solve_at_s(g, params, PushStateKind::S, s, m);
      if (!sol.feasible) continue;
      bool need_sp = false;
      for (size_t k2 = k; k2 < out.steps.size() && out.steps[k2].t == t_val;
           ++k2) {
        if (out.steps[k2].state_kind == PushStateKind::SPrime) need_sp = true;
      }
      if (need_sp &&
          !solve_at_s(g, params, PushStateKind::SPrime, s, m).feasible)
        continue;
      if (sol.objective < best_obj) {
        best_obj = sol.objective;
        best_s = s;
        best_sol = sol;
      }
    }
    if (best_s < 0.0)
      throw PlannerError(PlanError::TumbleKinematicsFailed,
                         "no reachable pushing point at rotation " +
                             std::to_string(rad2deg(rot_val)) + " deg");
    for (size_t k2 = k; k2 < out.steps.size() && out.steps[k2].t == t_val;
         ++k2) {
      PushStateKind kind = out.steps[k2].state_kind;
      InnerSolution sol =
          kind == PushStateKind::S
              ? best_sol
              : solve_at_s(g, params, PushStateKind::SPrime, best_s, m);
      out.steps[k2] = make_step(g, sol, kind, best_s, t_val);
    }
  }
  return out;
}

}  // namespace craneplan
