#pragma once

// The six dichotomy classes: per-class log-margins on sampled grids, the
// minimax characteristic fitter, witness-sequence falsification and the
// implication-lattice classifier.
//
// Every class inequality has the shape
//     (stable)   log||Phi_1(t,t0,x)v|| - log||Phi_1(s,t0,x)v||  + rate*A - rate_s*B - log_n - extra(s) <= 0
//     (unstable) log||Phi_2(s,t0,x)v|| - log||Phi_2(t,t0,x)v||  + rate*A - rate_s*B - log_n - extra(s) <= 0
// with (A, B) fixed by the class:
//     UED  (t - s, 0)         BVED (t, s)       ED (t, s)
//     UPD  (ln t - ln s, 0)   BVPD (ln t, ln s) PD (ln t, s) or (ln t, ln s)
// For the polynomial classes the ratio of norms equals ||Phi_k(t,s,x')v'|| /
// ||P_k(x')v'|| by the cocycle law, so both families share one residual table.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skewdich/cocycle.hpp"
#include "skewdich/errors.hpp"
#include "skewdich/expression.hpp"
#include "skewdich/grid.hpp"
#include "skewdich/minimax.hpp"
#include "skewdich/projectors.hpp"

namespace skewdich {

enum class DichotomyClass { kUED, kBVED, kED, kUPD, kBVPD, kPD };

inline constexpr std::array<DichotomyClass, 6> kAllClasses{DichotomyClass::kUED, DichotomyClass::kBVED,
                                                           DichotomyClass::kED,  DichotomyClass::kUPD,
                                                           DichotomyClass::kBVPD, DichotomyClass::kPD};

inline std::string to_string(DichotomyClass c) {
  switch (c) {
    case DichotomyClass::kUED: return "UED";
    case DichotomyClass::kBVED: return "BVED";
    case DichotomyClass::kED: return "ED";
    case DichotomyClass::kUPD: return "UPD";
    case DichotomyClass::kBVPD: return "BVPD";
    case DichotomyClass::kPD: return "PD";
  }
  return "?";
}

inline DichotomyClass class_from_string(const std::string& s) {
  for (DichotomyClass c : kAllClasses)
    if (to_string(c) == s) return c;
  throw ValidationError("unknown dichotomy class: " + s);
}

inline bool is_polynomial(DichotomyClass c) {
  return c == DichotomyClass::kUPD || c == DichotomyClass::kBVPD || c == DichotomyClass::kPD;
}

/// Direct implications between classes. UED => UPD, BVED => BVPD (when
/// alpha_i >= beta_i) and ED => PD hold on t >= s >= 1.
struct Implication {
  DichotomyClass stronger;
  DichotomyClass weaker;
};

inline constexpr std::array<Implication, 7> kImplications{{
    {DichotomyClass::kUED, DichotomyClass::kBVED},
    {DichotomyClass::kBVED, DichotomyClass::kED},
    {DichotomyClass::kUPD, DichotomyClass::kBVPD},
    {DichotomyClass::kBVPD, DichotomyClass::kPD},
    {DichotomyClass::kUED, DichotomyClass::kUPD},
    {DichotomyClass::kBVED, DichotomyClass::kBVPD},
    {DichotomyClass::kED, DichotomyClass::kPD},
}};

/// Classes that imply `c`, directly or transitively.
inline std::vector<DichotomyClass> stronger_than(DichotomyClass c) {
  std::vector<DichotomyClass> out;
  std::vector<DichotomyClass> frontier{c};
  while (!frontier.empty()) {
    const DichotomyClass cur = frontier.back();
    frontier.pop_back();
    for (const Implication& imp : kImplications)
      if (imp.weaker == cur && std::find(out.begin(), out.end(), imp.stronger) == out.end()) {
        out.push_back(imp.stronger);
        frontier.push_back(imp.stronger);
      }
  }
  return out;
}

enum class GaugeForm { kExponential, kPower };

inline std::string to_string(GaugeForm g) { return g == GaugeForm::kExponential ? "exponential" : "power"; }

/// Constants for one branch. Meaning per class:
///   UED  log_n = log N_k, rate = nu_k
///   BVED log_n = log N,   rate = alpha_k, rate_s = beta_k
///   ED   log_n = log K_k, rate = nu_k,    rate_s = eta_k  (N_k(s) = K_k e^{eta_k s} e^{extra(s)})
///   UPD  log_n = log N,   rate = alpha_k
///   BVPD log_n = log N,   rate = alpha_k, rate_s = beta_k
///   PD   log_n = log K,   rate = alpha_k, rate_s = eta    (N(s) = K e^{eta s} or K s^eta, times e^{extra(s)})
struct BranchParams {
  double log_n = 0.0;
  double rate = 1.0;
  double rate_s = 0.0;
};

struct ClassParams {
  DichotomyClass cls = DichotomyClass::kUED;
  std::array<BranchParams, 2> branch{};
  GaugeForm gauge = GaugeForm::kExponential;
  Expression extra_log_gauge;  // optional log-additive gauge term, e.g. log g(s)

  static ClassParams ued(double log_n1, double nu1, double log_n2, double nu2) {
    return {DichotomyClass::kUED, {{{log_n1, nu1, 0.0}, {log_n2, nu2, 0.0}}}, GaugeForm::kExponential, {}};
  }
  static ClassParams bved(double log_n, double alpha1, double beta1, double alpha2, double beta2) {
    return {DichotomyClass::kBVED, {{{log_n, alpha1, beta1}, {log_n, alpha2, beta2}}}, GaugeForm::kExponential, {}};
  }
  static ClassParams ed(double log_k1, double eta1, double nu1, double log_k2, double eta2, double nu2,
                        Expression extra = {}) {
    return {DichotomyClass::kED, {{{log_k1, nu1, eta1}, {log_k2, nu2, eta2}}}, GaugeForm::kExponential,
            std::move(extra)};
  }
  static ClassParams upd(double log_n, double alpha1, double alpha2) {
    return {DichotomyClass::kUPD, {{{log_n, alpha1, 0.0}, {log_n, alpha2, 0.0}}}, GaugeForm::kExponential, {}};
  }
  static ClassParams bvpd(double log_n, double alpha1, double beta1, double alpha2, double beta2) {
    return {DichotomyClass::kBVPD, {{{log_n, alpha1, beta1}, {log_n, alpha2, beta2}}}, GaugeForm::kExponential, {}};
  }
  static ClassParams pd(double log_k, double eta, GaugeForm form, double alpha1, double alpha2,
                        Expression extra = {}) {
    return {DichotomyClass::kPD, {{{log_k, alpha1, eta}, {log_k, alpha2, eta}}}, form, std::move(extra)};
  }
};

struct Coeffs {
  double a;
  double b;
};

inline Coeffs class_coeffs(DichotomyClass cls, GaugeForm gauge, double t, double s) {
  switch (cls) {
    case DichotomyClass::kUED: return {t - s, 0.0};
    case DichotomyClass::kBVED:
    case DichotomyClass::kED: return {t, s};
    case DichotomyClass::kUPD: return {std::log(t) - std::log(s), 0.0};
    case DichotomyClass::kBVPD: return {std::log(t), std::log(s)};
    case DichotomyClass::kPD: return {std::log(t), gauge == GaugeForm::kExponential ? s : std::log(s)};
  }
  return {0.0, 0.0};
}

inline void validate_params(const ClassParams& p) {
  for (const BranchParams& b : p.branch) {
    detail::require_valid(b.rate > 0.0, "class params: exponents must be positive");
    switch (p.cls) {
      case DichotomyClass::kUED:
      case DichotomyClass::kUPD: detail::require_valid(b.log_n >= 0.0, "class params: need N >= 1"); break;
      case DichotomyClass::kBVED:
      case DichotomyClass::kBVPD:
        detail::require_valid(b.log_n >= 0.0, "class params: need N >= 1");
        detail::require_valid(b.rate_s > 0.0, "class params: beta must be positive");
        break;
      case DichotomyClass::kED: break;
      case DichotomyClass::kPD:
        detail::require_valid(b.log_n >= 0.0 && b.rate_s >= 0.0, "class params: PD gauge must be >= 1");
        break;
    }
  }
}

/// log||Phi_b(s,t0,x)v|| differences, oriented so that each class margin is
/// residual + (class terms).
struct ResidualEntry {
  PointSample p;
  int vector_index;
  int branch;  // 1 stable, 2 unstable
  double r;
};

inline std::optional<double> branch_residual(const SkewEvolution& restricted, int branch, double t, double s,
                                             double t0, const BasePoint& x_at_t0, const StateVector& v) {
  const double lt = log_norm(apply(restricted, t, t0, x_at_t0, v));
  const double ls = log_norm(apply(restricted, s, t0, x_at_t0, v));
  if (lt == kNegInf || ls == kNegInf) return std::nullopt;
  return branch == 1 ? lt - ls : ls - lt;
}

struct ResidualTable {
  GridSpec grid;
  std::vector<ResidualEntry> entries;
};

/// Evaluates both branch residuals at every grid sample. The base point at
/// time t0 is phi(t0, 0, x0).
inline ResidualTable tabulate(const SkewEvolution& c, const ProjectorPair& pair, const GridSpec& grid,
                              const BasePoint& x0) {
  ResidualTable table{grid, {}};
  const SkewEvolution restricted[2] = {{c.cocycle, pair.p1}, {c.cocycle, pair.p2}};
  for (const PointSample& p : grid.samples()) {
    const BasePoint x = semiflow(p.t0, 0.0, x0);
    for (std::size_t vi = 0; vi < grid.vectors.size(); ++vi)
      for (int b = 1; b <= 2; ++b)
        if (auto r = branch_residual(restricted[b - 1], b, p.t, p.s, p.t0, x, grid.vectors[vi]))
          table.entries.push_back({p, static_cast<int>(vi), b, *r});
  }
  return table;
}

inline double entry_margin(const ResidualEntry& e, const ClassParams& params) {
  const BranchParams& bp = params.branch[e.branch - 1];
  const Coeffs k = class_coeffs(params.cls, params.gauge, e.p.t, e.p.s);
  double m = e.r + bp.rate * k.a - bp.log_n;
  if (k.b != 0.0) m -= bp.rate_s * k.b;
  if (!params.extra_log_gauge.empty()) m -= params.extra_log_gauge(e.p.s);
  return m;
}

struct MarginResult {
  double worst = kNegInf;
  std::optional<ResidualEntry> argmax;
};

inline void require_polynomial_domain(const ResidualTable& table, DichotomyClass cls) {
  if (!is_polynomial(cls)) return;
  for (const ResidualEntry& e : table.entries)
    detail::require_domain(e.p.s >= 1.0, "polynomial class on a grid with s < 1");
}

inline MarginResult class_margin(const ResidualTable& table, const ClassParams& params) {
  validate_params(params);
  require_polynomial_domain(table, params.cls);
  MarginResult out;
  for (const ResidualEntry& e : table.entries) {
    const double m = entry_margin(e, params);
    if (m > out.worst) {
      out.worst = m;
      out.argmax = e;
    }
  }
  return out;
}

/// Worst log-margin of `params` over the grid (both branches, zero vectors
/// skipped); <= 0 means the class inequalities hold at every sample.
inline double class_margin(const SkewEvolution& c, const ProjectorPair& pair, const ClassParams& params,
                           const GridSpec& grid, const BasePoint& x0 = {}) {
  if (is_polynomial(params.cls))
    detail::require_domain(grid.s_floor >= 1.0 || grid.s_range.min >= 1.0,
                           "polynomial class on a grid touching s < 1");
  return class_margin(tabulate(c, pair, grid, x0), params).worst;
}

enum class Verdict { kCertified, kViolated };

inline std::string to_string(Verdict v) { return v == Verdict::kCertified ? "certified" : "violated"; }

struct Certificate {
  DichotomyClass cls = DichotomyClass::kUED;
  ClassParams params;
  GridSpec grid;
  double worst_margin_log = 0.0;
  Verdict verdict = Verdict::kViolated;
  std::string source = "grid-fit";
  std::optional<ResidualEntry> argmax;
};

struct FitOptions {
  double log_n_cap = 50.0;
  double rate_floor = 1e-6;
  double rate_cap = 100.0;
  double gauge_rate_cap = 1e5;
  GaugeForm pd_gauge = GaugeForm::kPower;
};

namespace detail {

inline bool shares_constant(DichotomyClass c) {
  return c == DichotomyClass::kBVED || c == DichotomyClass::kUPD || c == DichotomyClass::kBVPD ||
         c == DichotomyClass::kPD;
}

inline bool uses_rate_s(DichotomyClass c) {
  return c != DichotomyClass::kUED && c != DichotomyClass::kUPD;
}

}  // namespace detail

/// Minimax fit of the class constants on a residual table.
///
/// Stage 1 minimises the worst margin with the prefactor at its cap; the
/// class is certified iff that minimum is within tol. Stage 2 then picks the
/// smallest prefactor, the largest decay/growth exponent compatible with it,
/// and finally the smallest s-exponent.
inline Certificate fit_class(const ResidualTable& table, DichotomyClass cls, const FitOptions& opt = {}) {
  require_polynomial_domain(table, cls);
  detail::require_valid(!table.entries.empty(), "fit_class: empty grid");
  const double tol = table.grid.tol_log;
  const GaugeForm gauge = cls == DichotomyClass::kPD ? opt.pd_gauge : GaugeForm::kExponential;
  const bool use_b = detail::uses_rate_s(cls);
  const Bounds abox{opt.rate_floor, opt.rate_cap};
  const Bounds bbox = !use_b ? Bounds{0.0, 0.0}
                      : (cls == DichotomyClass::kED || cls == DichotomyClass::kPD)
                          ? Bounds{0.0, opt.gauge_rate_cap}
                          : Bounds{opt.rate_floor, opt.rate_cap};

  std::array<AffineRows, 2> rows;
  for (const ResidualEntry& e : table.entries) {
    const Coeffs k = class_coeffs(cls, gauge, e.p.t, e.p.s);
    rows[e.branch - 1].add(e.r, k.a, k.b);
  }
  std::array<minimax::Point2, 2> best{};
  std::array<bool, 2> present{};
  for (int b = 0; b < 2; ++b) {
    rows[b].compact();
    present[b] = !rows[b].empty();
    if (present[b]) best[b] = minimax::argmin_box(rows[b], abox, bbox, use_b);
  }

  std::array<double, 2> level{0.0, 0.0};
  if (detail::shares_constant(cls)) {
    double m = 0.0;
    for (int b = 0; b < 2; ++b)
      if (present[b]) m = std::max(m, best[b].value);
    level = {std::min(m, opt.log_n_cap), std::min(m, opt.log_n_cap)};
  } else {
    for (int b = 0; b < 2; ++b)
      if (present[b]) level[b] = std::clamp(best[b].value, 0.0, opt.log_n_cap);
  }

  ClassParams params;
  params.cls = cls;
  params.gauge = gauge;
  for (int b = 0; b < 2; ++b) {
    BranchParams& bp = params.branch[b];
    bp.log_n = level[b];
    bp.rate = abox.lo;
    bp.rate_s = use_b ? bbox.lo : 0.0;
    if (!present[b]) continue;
    const AffineRows& R = rows[b];
    if (best[b].value > level[b] + 0.5 * tol) {
      bp.rate = best[b].a;
      bp.rate_s = use_b ? best[b].b : 0.0;
      continue;
    }
    const double target = level[b] + 0.5 * tol;
    if (!use_b) {
      bp.rate = minimax::largest_feasible([&](double a) { return R.value(a, 0.0); }, best[b].a, abox.hi, target);
    } else {
      bp.rate = minimax::largest_feasible([&](double a) { return minimax::min_over_b(R, a, bbox); }, best[b].a,
                                          abox.hi, target);
      const double from = minimax::argmin_b(R, bp.rate, bbox);
      bp.rate_s = minimax::smallest_feasible([&](double s) { return R.value(bp.rate, s); }, bbox.lo, from, target);
    }
  }
  if (cls == DichotomyClass::kPD) {
    const double eta = std::max(params.branch[0].rate_s, params.branch[1].rate_s);
    params.branch[0].rate_s = params.branch[1].rate_s = eta;
  }

  Certificate cert;
  cert.cls = cls;
  cert.params = params;
  cert.grid = table.grid;
  const MarginResult mr = class_margin(table, params);
  cert.worst_margin_log = mr.worst;
  cert.argmax = mr.argmax;
  cert.verdict = mr.worst <= tol ? Verdict::kCertified : Verdict::kViolated;
  return cert;
}

inline Certificate fit_class(const SkewEvolution& c, const ProjectorPair& pair, DichotomyClass cls,
                             const GridSpec& grid, const BasePoint& x0 = {}, const FitOptions& opt = {}) {
  return fit_class(tabulate(c, pair, is_polynomial(cls) ? grid.restricted_to_polynomial() : grid, x0), cls, opt);
}

// ---------------------------------------------------------------------------
// Conversions along the implication lattice.

inline std::optional<ClassParams> convert(const ClassParams& p, DichotomyClass to) {
  using C = DichotomyClass;
  const auto& b = p.branch;
  const double log_n = std::max(b[0].log_n, b[1].log_n);
  if (p.cls == C::kUED && to == C::kBVED) return ClassParams::bved(log_n, b[0].rate, b[0].rate, b[1].rate, b[1].rate);
  if (p.cls == C::kUED && to == C::kUPD) return ClassParams::upd(log_n, b[0].rate, b[1].rate);
  if (p.cls == C::kBVED && to == C::kED)
    return ClassParams::ed(b[0].log_n, b[0].rate_s, b[0].rate, b[1].log_n, b[1].rate_s, b[1].rate);
  if (p.cls == C::kBVED && to == C::kBVPD) {
    if (b[0].rate < b[0].rate_s || b[1].rate < b[1].rate_s) return std::nullopt;
    return ClassParams::bvpd(log_n, b[0].rate, b[0].rate_s, b[1].rate, b[1].rate_s);
  }
  if (p.cls == C::kUPD && to == C::kBVPD) return ClassParams::bvpd(log_n, b[0].rate, b[0].rate, b[1].rate, b[1].rate);
  if (p.cls == C::kBVPD && to == C::kPD)
    return ClassParams::pd(log_n, std::max(b[0].rate_s, b[1].rate_s), GaugeForm::kPower, b[0].rate, b[1].rate);
  if (p.cls == C::kED && to == C::kPD)
    return ClassParams::pd(std::max(0.0, log_n), std::max(b[0].rate_s, b[1].rate_s), GaugeForm::kExponential,
                           b[0].rate, b[1].rate, p.extra_log_gauge);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Witness sequences.

enum class WitnessKind { kSinPeaks, kCosValleys, kKnotDrop, kExpLogPeaks, kRay };

inline std::string to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::kSinPeaks: return "sin-peaks";
    case WitnessKind::kCosValleys: return "cos-valleys";
    case WitnessKind::kKnotDrop: return "knot-drop";
    case WitnessKind::kExpLogPeaks: return "exp-log-peaks";
    case WitnessKind::kRay: return "ray";
  }
  return "?";
}

/// A closed-form (t_n, s_n) sequence, evaluated with t0 = s_n and the
/// instance base point taken as the point at time s_n.
struct WitnessSpec {
  std::string name;
  DichotomyClass cls = DichotomyClass::kUED;
  WitnessKind kind = WitnessKind::kSinPeaks;
  int n_min = 1;
  int n_max = 32;
  double s0 = 1.0;    // ray
  double step = 1.0;  // ray
  StateVector v{1.0, 1.0};
  std::optional<double> closed_form_increment;

  std::pair<double, double> at(int n) const {
    constexpr double pi = std::numbers::pi;
    switch (kind) {
      case WitnessKind::kSinPeaks: return {2 * n * pi + pi / 2, 2 * n * pi};
      case WitnessKind::kCosValleys: return {2 * n * pi, 2 * n * pi - pi};
      case WitnessKind::kKnotDrop: return {n + std::ldexp(1.0, -2 * n), static_cast<double>(n)};
      case WitnessKind::kExpLogPeaks:
        return {std::expm1(2 * n * pi + pi / 2), std::expm1(2 * n * pi - pi / 2)};
      case WitnessKind::kRay: return {s0 + step * n, s0};
    }
    return {0.0, 0.0};
  }

  std::string formula() const {
    switch (kind) {
      case WitnessKind::kSinPeaks: return "t=2n*pi+pi/2, s=2n*pi";
      case WitnessKind::kCosValleys: return "t=2n*pi, s=2n*pi-pi";
      case WitnessKind::kKnotDrop: return "t=n+4^-n, s=n";
      case WitnessKind::kExpLogPeaks: return "t=exp(2n*pi+pi/2)-1, s=exp(2n*pi-pi/2)-1";
      case WitnessKind::kRay: return "t=s0+step*n, s=s0";
    }
    return "";
  }
};

enum class WitnessVerdict { kFalsified, kInconclusive };

inline std::string to_string(WitnessVerdict v) {
  return v == WitnessVerdict::kFalsified ? "falsified" : "inconclusive";
}

struct WitnessResult {
  WitnessSpec spec;
  std::vector<int> ns;
  std::vector<ClassParams> family;
  std::vector<std::vector<double>> candidate_margins;  // [candidate][n]
  std::vector<double> margins_log;                     // pointwise min over the family
  double min_increment = 0.0;                          // over all candidates
  WitnessVerdict verdict = WitnessVerdict::kInconclusive;
};

inline constexpr double kFalsifyFinalMargin = 50.0;
inline constexpr double kFalsifyMinIncrement = 1e-6;

/// Class margin of `params` at one witness point (both branches).
inline double witness_margin(const SkewEvolution& c, const ProjectorPair& pair, const ClassParams& params, double t,
                             double s, const BasePoint& x, const StateVector& v) {
  double worst = kNegInf;
  for (int b = 1; b <= 2; ++b) {
    const SkewEvolution restricted{c.cocycle, pair[b]};
    if (auto r = branch_residual(restricted, b, t, s, s, x, v)) {
      const ResidualEntry e{{t, s, s}, 0, b, *r};
      worst = std::max(worst, entry_margin(e, params));
    }
  }
  return worst;
}

/// A spread of constants over which a witness must diverge.
inline std::vector<ClassParams> default_family(DichotomyClass cls) {
  std::vector<ClassParams> out;
  const bool gauge = cls == DichotomyClass::kED || cls == DichotomyClass::kPD;
  const std::vector<double> rate_s = detail::uses_rate_s(cls)
                                         ? (gauge ? std::vector<double>{0.0, 1.0, 3.0}
                                                  : std::vector<double>{1e-3, 1.0, 3.0})
                                         : std::vector<double>{0.0};
  for (double log_n : {0.0, 10.0})
    for (double rate : {1e-3, 1.0, 3.0})
      for (double rs : rate_s) {
        ClassParams p;
        p.cls = cls;
        p.gauge = cls == DichotomyClass::kPD ? GaugeForm::kPower : GaugeForm::kExponential;
        p.branch = {BranchParams{log_n, rate, rs}, BranchParams{log_n, rate, rs}};
        out.push_back(p);
      }
  return out;
}

/// Evaluates the witness under every candidate constant set. The verdict is
/// "falsified" only when, for every candidate, the margins increase by at
/// least a fixed positive step and end above 50 log-units.
inline WitnessResult falsify(const SkewEvolution& c, const ProjectorPair& pair, const WitnessSpec& spec,
                             std::vector<ClassParams> family, const BasePoint& x0 = {}) {
  WitnessResult out;
  out.spec = spec;
  out.family = std::move(family);
  for (int n = spec.n_min; n <= spec.n_max; ++n) out.ns.push_back(n);
  bool all_diverge = !out.family.empty() && out.ns.size() >= 2;
  out.min_increment = std::numeric_limits<double>::infinity();
  for (const ClassParams& p : out.family) {
    std::vector<double> m;
    for (int n : out.ns) {
      const auto [t, s] = spec.at(n);
      if (is_polynomial(spec.cls)) detail::require_domain(s >= 1.0, "witness: polynomial class needs s >= 1");
      m.push_back(witness_margin(c, pair, p, t, s, x0, spec.v));
    }
    double inc = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < m.size(); ++i) inc = std::min(inc, m[i] - m[i - 1]);
    if (m.size() >= 2) out.min_increment = std::min(out.min_increment, inc);
    const bool diverges = m.size() >= 2 && inc >= kFalsifyMinIncrement && m.back() > kFalsifyFinalMargin;
    all_diverge = all_diverge && diverges;
    out.candidate_margins.push_back(std::move(m));
  }
  if (!std::isfinite(out.min_increment)) out.min_increment = 0.0;
  out.margins_log.assign(out.ns.size(), std::numeric_limits<double>::infinity());
  for (const auto& m : out.candidate_margins)
    for (std::size_t i = 0; i < m.size(); ++i) out.margins_log[i] = std::min(out.margins_log[i], m[i]);
  out.verdict = all_diverge ? WitnessVerdict::kFalsified : WitnessVerdict::kInconclusive;
  return out;
}

inline WitnessResult falsify(const SkewEvolution& c, const ProjectorPair& pair, const WitnessSpec& spec,
                             const BasePoint& x0 = {}) {
  return falsify(c, pair, spec, default_family(spec.cls), x0);
}

// ---------------------------------------------------------------------------
// Classification.

struct Classification {
  std::vector<Certificate> certificates;  // indexed like kAllClasses
  std::vector<WitnessResult> witnesses;
  std::vector<std::string> notes;

  const Certificate& operator[](DichotomyClass c) const { return certificates[static_cast<std::size_t>(c)]; }
};

/// Fits all six classes, applies registered witnesses, and makes the result
/// consistent with the implication lattice: falsification propagates to
/// stronger classes, certification to weaker classes via converted constants.
/// Exponential classes use `grid`; polynomial classes its s >= 1 sub-grid.
inline Classification classify(const SkewEvolution& c, const ProjectorPair& pair, const GridSpec& grid,
                               const std::vector<WitnessSpec>& witnesses, const BasePoint& x0 = {},
                               const FitOptions& opt = {}) {
  const ResidualTable exp_table = tabulate(c, pair, grid, x0);
  const ResidualTable poly_table = tabulate(c, pair, grid.restricted_to_polynomial(), x0);
  auto table_for = [&](DichotomyClass k) -> const ResidualTable& {
    return is_polynomial(k) ? poly_table : exp_table;
  };

  Classification out;
  for (DichotomyClass k : kAllClasses) out.certificates.push_back(fit_class(table_for(k), k, opt));
  auto cert = [&](DichotomyClass k) -> Certificate& { return out.certificates[static_cast<std::size_t>(k)]; };

  for (const WitnessSpec& w : witnesses) {
    WitnessResult res = falsify(c, pair, w, x0);
    if (res.verdict == WitnessVerdict::kFalsified) {
      const double final_margin = res.margins_log.back();
      std::vector<DichotomyClass> hit = stronger_than(w.cls);
      hit.insert(hit.begin(), w.cls);
      for (DichotomyClass k : hit) {
        Certificate& ck = cert(k);
        if (ck.verdict == Verdict::kCertified)
          out.notes.push_back(to_string(k) + ": grid certificate overridden by witness " + w.name);
        ck.verdict = Verdict::kViolated;
        ck.worst_margin_log = std::max(ck.worst_margin_log, final_margin);
        ck.source = (k == w.cls ? "witness:" : "implied-by-witness:") + w.name;
      }
    }
    out.witnesses.push_back(std::move(res));
  }

  const DichotomyClass order[] = {DichotomyClass::kUED, DichotomyClass::kBVED, DichotomyClass::kUPD,
                                  DichotomyClass::kED,  DichotomyClass::kBVPD, DichotomyClass::kPD};
  for (DichotomyClass strong : order) {
    if (cert(strong).verdict != Verdict::kCertified) continue;
    for (const Implication& imp : kImplications) {
      if (imp.stronger != strong) continue;
      Certificate& weak = cert(imp.weaker);
      if (weak.verdict == Verdict::kCertified) continue;
      const auto converted = convert(cert(strong).params, imp.weaker);
      if (!converted) continue;
      const MarginResult mr = class_margin(table_for(imp.weaker), *converted);
      if (mr.worst > grid.tol_log)
        throw LatticeError(to_string(strong) + " certified but converted " + to_string(imp.weaker) +
                           " constants fail with margin " + std::to_string(mr.worst));
      weak.params = *converted;
      weak.worst_margin_log = mr.worst;
      weak.argmax = mr.argmax;
      weak.verdict = Verdict::kCertified;
      weak.source = "implied:" + to_string(strong);
    }
  }

  for (const Implication& imp : kImplications) {
    const Certificate& s = cert(imp.stronger);
    const Certificate& w = cert(imp.weaker);
    if (s.verdict == Verdict::kCertified && w.verdict == Verdict::kViolated) {
      if (imp.stronger == DichotomyClass::kBVED && imp.weaker == DichotomyClass::kBVPD &&
          !convert(s.params, imp.weaker))
        continue;  // the implication needs alpha_i >= beta_i
      throw LatticeError(to_string(imp.stronger) + " certified while " + to_string(imp.weaker) + " violated");
    }
  }
  return out;
}

}  // namespace skewdich
