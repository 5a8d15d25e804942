#pragma once

// Independent brute-force references shared by the unit and acceptance
// suites. Everything here re-derives results from the raw constraint
// formulas on dense grids; none of it calls back into the solver internals
// it is used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "craneplan/collision.hpp"
#include "craneplan/core_types.hpp"
#include "craneplan/tumble_planner.hpp"

namespace craneplan::oracle {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Brute-force minimum of the per-instant objective over (s, beta, T) grids,
/// with every constraint checked by direct recomputation. `s_fixed` pins the
/// pushing point (used to audit recorded trajectory steps); otherwise s runs
/// over a 200-point grid, optionally clipped to a chaining window around
/// `prev_p1`.
struct PushOracleResult {
  bool feasible = false;
  double objective = kInf;
  double s = 0.0;
};

inline PushOracleResult push_instant_objective(
    const PlateSpec& plate, const EdgeContactModel& edges, const Vec2& pin,
    const TumbleParams& params, double rotation, PushStateKind kind,
    std::optional<double> s_fixed = std::nullopt,
    std::optional<Vec2> prev_p1 = std::nullopt, double speed_bound = kInf) {
  PushOracleResult out;
  InstantGeometry g = instant_geometry(rotation, plate, edges, pin);
  const double W = plate.weight_newton();
  const Vec2 G{0.0, -W};
  const double eps = 1e-6;

  std::vector<double> s_values;
  if (s_fixed) {
    s_values.push_back(*s_fixed);
  } else {
    const int n_s = 200;
    for (int i = 1; i <= n_s; ++i)
      s_values.push_back(g.face_len * i / n_s);
  }

  double band_lo = std::atan(1.0 / plate.mu1);
  double band_hi = kPi - band_lo;
  const int n_beta = 180;
  const int n_t = 256;

  // Tension never needs to exceed what balances several plate weights.
  double t_hi = 6.0 * W;

  for (double s : s_values) {
    Vec2 p1 = g.pivot + g.face_dir * s;
    if (prev_p1 && (p1 - *prev_p1).norm() > speed_bound + 1e-12) continue;
    Vec2 r1 = g.face_dir * s;
    for (int ib = 0; ib <= n_beta; ++ib) {
      double beta = band_lo + (band_hi - band_lo) * ib / n_beta;

      auto eval_at_T = [&](double T) -> double {
        if (T < 0.0) return kInf;
        if (kind == PushStateKind::SPrime && T != 0.0) return kInf;
        // Moment balance about the pivot gives |F1|.
        Vec2 t_vec = g.rope_dir * T;
        double moment_wo_f1 =
            (g.hook - g.pivot).cross(t_vec) + (g.com - g.pivot).cross(G);
        Vec2 f1_dir = g.face_dir * std::cos(beta) + g.face_normal * std::sin(beta);
        double lever = r1.cross(f1_dir);
        if (std::abs(lever) < 1e-12) return kInf;
        double mag = -moment_wo_f1 / lever;
        Vec2 F1 = f1_dir * mag;
        Vec2 F0 = -(G + t_vec + F1);

        // Constraint audit straight from the written forms.
        double f1sq = F1.dot(F1);
        if (!(f1sq >= eps && f1sq <= params.f1_sq_max - eps)) return kInf;
        double f0n = F0.y;
        double f0t = -F0.x;  // tangential, opposing the tumble direction
        if (!(f0n >= eps && f0t >= eps && f0t <= plate.mu0 * f0n - eps))
          return kInf;
        double cosang =
            F1.dot(r1) / (F1.norm() * r1.norm());
        double ang = std::acos(std::clamp(cosang, -1.0, 1.0));
        if (!(ang > band_lo && ang < band_hi)) return kInf;
        if (F1.dot(g.face_normal) <= 0.0) return kInf;  // push into the face
        // Residual check: the equilibrium must close exactly.
        Vec2 fsum = F0 + F1 + t_vec + G;
        double tq = r1.cross(F1) + (g.hook - g.pivot).cross(t_vec) +
                    (g.com - g.pivot).cross(G);
        if (fsum.norm() > 1e-9 || std::abs(tq) > 1e-9) return kInf;
        return params.k1 * F0.dot(F0) + params.k2 * F1.dot(F1) +
               params.k3 * T * T;
      };

      if (kind == PushStateKind::SPrime) {
        double v = eval_at_T(0.0);
        if (v < out.objective) {
          out.objective = v;
          out.feasible = true;
          out.s = s;
        }
        continue;
      }
      double best_v = kInf;
      double best_T = 0.0;
      for (int it = 0; it <= n_t; ++it) {
        double T = t_hi * it / n_t;
        double v = eval_at_T(T);
        if (v < best_v) {
          best_v = v;
          best_T = T;
        }
      }
      if (best_v < kInf) {
        // Parabolic refinement around the best tension sample.
        double h = t_hi / n_t;
        for (double step = h; step > 1e-7; step *= 0.5) {
          double l = eval_at_T(best_T - step);
          double r = eval_at_T(best_T + step);
          if (l < best_v) {
            best_v = l;
            best_T -= step;
          } else if (r < best_v) {
            best_v = r;
            best_T += step;
          }
        }
      }
      if (best_v < out.objective) {
        out.objective = best_v;
        out.feasible = true;
        out.s = s;
      }
    }
  }
  return out;
}

/// Independent box intersection test: corner containment plus all edge
/// segments of one box against all faces of the other.
inline std::array<Point3, 8> obb_corners(const Obb& b) {
  std::array<Point3, 8> out;
  int i = 0;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1})
        out[i++] = b.pose.apply({sx * b.half_extents.x, sy * b.half_extents.y,
                                 sz * b.half_extents.z});
  return out;
}

inline bool point_in_obb(const Point3& p, const Obb& b) {
  Vec3 local = b.pose.orientation.conjugate().rotate(p - b.pose.position);
  return std::abs(local.x) <= b.half_extents.x + 1e-9 &&
         std::abs(local.y) <= b.half_extents.y + 1e-9 &&
         std::abs(local.z) <= b.half_extents.z + 1e-9;
}

/// Segment vs axis-aligned slab box in the box's local frame.
inline bool segment_hits_box_local(Vec3 a, Vec3 b, const Vec3& half) {
  double t0 = 0.0, t1 = 1.0;
  Vec3 d = b - a;
  const double lo[3] = {-half.x, -half.y, -half.z};
  const double hi[3] = {half.x, half.y, half.z};
  const double av[3] = {a.x, a.y, a.z};
  const double dv[3] = {d.x, d.y, d.z};
  for (int i = 0; i < 3; ++i) {
    if (std::abs(dv[i]) < 1e-15) {
      if (av[i] < lo[i] - 1e-12 || av[i] > hi[i] + 1e-12) return false;
      continue;
    }
    double u0 = (lo[i] - av[i]) / dv[i];
    double u1 = (hi[i] - av[i]) / dv[i];
    if (u0 > u1) std::swap(u0, u1);
    t0 = std::max(t0, u0);
    t1 = std::min(t1, u1);
    if (t0 > t1 + 1e-12) return false;
  }
  return true;
}

inline bool obb_overlap_bruteforce(const Obb& a, const Obb& b) {
  auto ca = obb_corners(a);
  auto cb = obb_corners(b);
  for (const Point3& p : ca)
    if (point_in_obb(p, b)) return true;
  for (const Point3& p : cb)
    if (point_in_obb(p, a)) return true;
  // Edge-vs-box in both directions.
  static const int edges[12][2] = {{0, 1}, {0, 2}, {0, 4}, {1, 3},
                                   {1, 5}, {2, 3}, {2, 6}, {3, 7},
                                   {4, 5}, {4, 6}, {5, 7}, {6, 7}};
  auto edges_hit = [&](const std::array<Point3, 8>& corners, const Obb& box) {
    for (const auto& e : edges) {
      Vec3 la = box.pose.orientation.conjugate().rotate(corners[e[0]] -
                                                        box.pose.position);
      Vec3 lb = box.pose.orientation.conjugate().rotate(corners[e[1]] -
                                                        box.pose.position);
      if (segment_hits_box_local(la, lb, box.half_extents)) return true;
    }
    return false;
  };
  return edges_hit(ca, b) || edges_hit(cb, a);
}

}  // namespace craneplan::oracle
