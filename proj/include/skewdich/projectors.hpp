#pragma once

// Projector families, complementary projectors, invariance/compatibility
// checks and restricted skew-evolutions Phi_k = Phi P_k.

#include <cmath>
#include <sstream>
#include <vector>

#include "skewdich/cocycle.hpp"
#include "skewdich/errors.hpp"
#include "skewdich/matrix.hpp"

namespace skewdich {

struct ProjectorPair {
  ProjectorFamily p1;
  ProjectorFamily p2;

  const ProjectorFamily& operator[](int k) const { return k == 1 ? p1 : p2; }
};

inline constexpr double kProjectorTol = 1e-12;

inline bool is_idempotent(const Matrix2& m, double tol = kProjectorTol) {
  return max_abs_entry(m * m - m) <= tol;
}

/// x -> I - P(x). Idempotence of P is validated at `probe`.
inline ProjectorFamily complementary(const ProjectorFamily& p, const BasePoint& probe = {}) {
  detail::require_valid(is_idempotent(p(probe)), "complementary: projector is not idempotent");
  if (p.is_constant()) return ProjectorFamily::constant(identity2() - p(probe));
  return ProjectorFamily([p](const BasePoint& x) { return identity2() - p(x); });
}

inline ProjectorPair coordinate_projectors() {
  return {ProjectorFamily::constant({{{1.0, 0.0}, {0.0, 0.0}}}),
          ProjectorFamily::constant({{{0.0, 0.0}, {0.0, 1.0}}})};
}

inline ProjectorPair pair_from(const ProjectorFamily& p1, const BasePoint& probe = {}) {
  return {p1, complementary(p1, probe)};
}

/// Structural conditions on a pair at one base point: both idempotent,
/// P1 + P2 = I, P1 P2 = P2 P1 = 0. Returns the worst entry error.
inline double pair_structure_error(const ProjectorPair& pair, const BasePoint& x) {
  const Matrix2 a = pair.p1(x);
  const Matrix2 b = pair.p2(x);
  double e = max_abs_entry(a * a - a);
  e = std::max(e, max_abs_entry(b * b - b));
  e = std::max(e, max_abs_entry(identity2() - a - b));
  e = std::max(e, max_abs_entry(a * b));
  e = std::max(e, max_abs_entry(b * a));
  return e;
}

/// Relative componentwise mismatch between P(phi(t,s,x)) Phi(t,s,x) v and
/// Phi(t,s,x) P(x) v; zero against zero counts as 0.
inline double invariance_residual(const SkewEvolution& c, const ProjectorFamily& p, double t, double s,
                                  const BasePoint& x, const StateVector& v) {
  detail::require_domain(s >= 0.0 && t >= s, "invariance_residual: need t >= s >= 0");
  const LogVector lhs = apply_matrix(p(semiflow(t, s, x)), apply(c.cocycle, t, s, x, v));
  const LogVector rhs = apply(c.cocycle, t, s, x, apply_matrix(p(x), v.to_log()));
  double r = 0.0;
  for (int k = 0; k < 2; ++k) {
    if (lhs[k].is_zero() && rhs[k].is_zero()) continue;
    const double scale = std::max(lhs[k].log_abs, rhs[k].log_abs);
    const LogScalar diff = lhs[k] - rhs[k];
    if (!diff.is_zero()) r = std::max(r, std::exp(diff.log_abs - scale));
  }
  return r;
}

inline std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out;
  const double a = std::log1p(lo);
  const double b = std::log1p(hi);
  for (int i = 0; i < count; ++i) out.push_back(std::expm1(a + (b - a) * i / (count - 1)));
  out.front() = lo;
  out.back() = hi;
  return out;
}

struct CompatibilityReport {
  bool compatible = true;
  double worst_residual = 0.0;
  double structure_error = 0.0;
  double t = 0.0, s = 0.0;  // offending point when incompatible
  int k = 0;
};

/// Checks the pair structure and invariance on a 7x7 log-spaced (t, s) grid in [0, 60] against the
/// basis vectors.
inline CompatibilityReport check_compatibility(const SkewEvolution& c, const ProjectorPair& pair,
                                               const BasePoint& x0, double tol = 1e-9) {
  CompatibilityReport rep;
  const auto times = log_spaced(0.0, 60.0, 7);
  const StateVector basis[2] = {{1.0, 0.0}, {0.0, 1.0}};
  for (double s : times) {
    const BasePoint x = semiflow(s, 0.0, x0);
    rep.structure_error = std::max(rep.structure_error, pair_structure_error(pair, x));
    for (double t : times) {
      if (t < s) continue;
      for (int k = 1; k <= 2; ++k)
        for (const StateVector& v : basis) {
          const double r = invariance_residual(c, pair[k], t, s, x, v);
          if (r > rep.worst_residual) {
            rep.worst_residual = r;
            rep.t = t;
            rep.s = s;
            rep.k = k;
          }
        }
    }
  }
  rep.compatible = rep.worst_residual <= tol && rep.structure_error <= kProjectorTol;
  return rep;
}

/// C_k = (phi, Phi P_k). Throws IncompatibleProjectors with the offending
/// grid point when the pair fails validation.
inline SkewEvolution restrict(const SkewEvolution& c, const ProjectorPair& pair, int k, const BasePoint& x0 = {}) {
  detail::require_valid(k == 1 || k == 2, "restrict: k must be 1 or 2");
  const CompatibilityReport rep = check_compatibility(c, pair, x0);
  if (!rep.compatible) {
    std::ostringstream os;
    os << "projector pair incompatible: residual " << rep.worst_residual << " at t=" << rep.t << " s=" << rep.s
       << " (P" << rep.k << "), structure error " << rep.structure_error;
    throw IncompatibleProjectors(os.str());
  }
  return SkewEvolution{c.cocycle, pair[k]};
}

}  // namespace skewdich
