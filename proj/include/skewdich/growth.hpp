#pragma once

// Exponential growth / decay bounds with gauge M(u) = K e^{eta u}.
//
//   growth: ||Phi(t,t0,x)v|| <= M(s) e^{omega (t-s)} ||Phi(s,t0,x)v||
//   decay:  ||Phi(s,t0,x)v|| <= M(t) e^{omega (t-s)} ||Phi(t,t0,x)v||

#include <algorithm>
#include <cmath>
#include <string>

#include "skewdich/cocycle.hpp"
#include "skewdich/errors.hpp"
#include "skewdich/grid.hpp"
#include "skewdich/minimax.hpp"

namespace skewdich {

enum class GrowthKind { kGrowth, kDecay };

inline std::string to_string(GrowthKind k) { return k == GrowthKind::kGrowth ? "growth" : "decay"; }

struct GrowthBounds {
  GrowthKind kind = GrowthKind::kGrowth;
  double log_k = 0.0;
  double eta = 0.0;
  double omega = 1.0;
  bool uniform = false;
  bool bounded = false;
  double worst_margin_log = 0.0;

  double log_m(double u) const { return log_k + eta * u; }
};

inline constexpr double kOmegaFloor = 1e-6;

struct GrowthFitOptions {
  double omega_cap = 100.0;
  double eta_cap = 1e5;
  double log_k_cap = 50.0;
};

namespace detail {

struct GrowthRow {
  double r;
  double t, s;
};

inline std::vector<GrowthRow> growth_rows(const SkewEvolution& c, GrowthKind kind, const GridSpec& grid,
                                          const BasePoint& x0) {
  std::vector<GrowthRow> rows;
  for (const PointSample& p : grid.samples()) {
    const BasePoint x = semiflow(p.t0, 0.0, x0);
    for (const StateVector& v : grid.vectors) {
      const double lt = log_norm(apply(c, p.t, p.t0, x, v));
      const double ls = log_norm(apply(c, p.s, p.t0, x, v));
      if (lt == kNegInf || ls == kNegInf) continue;
      rows.push_back({kind == GrowthKind::kGrowth ? lt - ls : ls - lt, p.t, p.s});
    }
  }
  return rows;
}

inline double growth_row_margin(const GrowthRow& row, const GrowthBounds& b) {
  return row.r - b.omega * (row.t - row.s) - b.log_m(b.kind == GrowthKind::kGrowth ? row.s : row.t);
}

/// log of the l1 operator norm of Phi(t,s,x) P(x): the largest column norm.
inline double log_op_norm(const SkewEvolution& c, double t, double s, const BasePoint& x) {
  return std::max(log_norm(apply(c, t, s, x, StateVector{1.0, 0.0})),
                  log_norm(apply(c, t, s, x, StateVector{0.0, 1.0})));
}

}  // namespace detail

/// max over the grid of log LHS - log RHS.
inline double growth_margin(const SkewEvolution& c, const GrowthBounds& b, const GridSpec& grid,
                            const BasePoint& x0 = {}) {
  detail::require_valid(b.omega > 0.0 && b.log_k >= 0.0 && b.eta >= 0.0, "growth bounds: need omega > 0, M >= 1");
  const auto rows = detail::growth_rows(c, b.kind, grid, x0);
  double worst = kNegInf;
  for (const auto& row : rows) worst = std::max(worst, detail::growth_row_margin(row, b));
  return worst;
}

/// Operator-norm form with constant M: ||Phi(t,s,x)|| <= M e^{omega (t-s)}.
inline double bounded_growth_margin(const SkewEvolution& c, double log_m, double omega, const GridSpec& grid,
                                    const BasePoint& x0 = {}) {
  double worst = kNegInf;
  const auto ts = grid.axis(grid.t_range);
  for (double s : grid.axis(grid.s_range)) {
    if (s < grid.s_floor) continue;
    const BasePoint x = semiflow(s, 0.0, x0);
    for (double t : ts) {
      if (t < s) continue;
      const double l = detail::log_op_norm(c, t, s, x);
      if (l == kNegInf) continue;
      worst = std::max(worst, l - omega * (t - s) - log_m);
    }
  }
  return worst;
}

/// Smallest K, then smallest omega, then smallest eta certifying the bound on
/// the grid.
inline GrowthBounds fit_growth(const SkewEvolution& c, GrowthKind kind, const GridSpec& grid,
                               const BasePoint& x0 = {}, const GrowthFitOptions& opt = {}) {
  const auto raw = detail::growth_rows(c, kind, grid, x0);
  detail::require_valid(!grid.samples().empty(), "fit_growth: empty grid");
  GrowthBounds b;
  b.kind = kind;
  b.omega = kOmegaFloor;
  if (raw.empty()) {
    b.uniform = b.bounded = true;
    b.worst_margin_log = kNegInf;
    return b;
  }
  AffineRows rows;
  for (const auto& row : raw) rows.add(row.r, -(row.t - row.s), kind == GrowthKind::kGrowth ? row.s : row.t);
  rows.compact();
  const Bounds wbox{kOmegaFloor, opt.omega_cap};
  const Bounds ebox{0.0, opt.eta_cap};
  const minimax::Point2 best = minimax::argmin_box(rows, wbox, ebox, true);
  const double tol = grid.tol_log;
  b.log_k = std::clamp(best.value, 0.0, opt.log_k_cap);
  const double target = b.log_k + 0.5 * tol;
  if (best.value > target) {
    b.omega = best.a;
    b.eta = best.b;
  } else {
    b.omega = minimax::smallest_feasible([&](double w) { return minimax::min_over_b(rows, w, ebox); }, wbox.lo,
                                         best.a, target);
    const double from = minimax::argmin_b(rows, b.omega, ebox);
    b.eta = minimax::smallest_feasible([&](double e) { return rows.value(b.omega, e); }, ebox.lo, from, target);
  }
  b.worst_margin_log = kNegInf;
  for (const auto& row : raw) b.worst_margin_log = std::max(b.worst_margin_log, detail::growth_row_margin(row, b));
  b.uniform = b.eta == 0.0;
  b.bounded = b.uniform && kind == GrowthKind::kGrowth &&
              bounded_growth_margin(c, b.log_k, b.omega, grid, x0) <= tol;
  return b;
}

}  // namespace skewdich
