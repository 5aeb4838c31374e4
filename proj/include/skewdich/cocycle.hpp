#pragma once

// Diagonal evolution cocycles over the translate semiflow. Component k of
// Phi(t, s, x) v has log-magnitude
//
//   h_k(t) - h_k(s) + c_k * \int_0^{t-s} x(u) du + lambda (t - s) + log|v_k|,
//
// which covers every closed-form example in the gallery.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "skewdich/base_space.hpp"
#include "skewdich/errors.hpp"
#include "skewdich/expression.hpp"
#include "skewdich/log_scalar.hpp"
#include "skewdich/matrix.hpp"

namespace skewdich {

struct DiagonalCocycle {
  std::array<Expression, 2> h;
  std::array<double, 2> c{0.0, 0.0};
  double shift_lambda = 0.0;

  /// log of the k-th diagonal entry of Phi(t, s, x).
  double log_factor(int k, double t, double s, const BasePoint& x) const {
    if (t == s) return 0.0;
    const double delta = t - s;
    double acc = h[k](t) - h[k](s) + shift_lambda * delta;
    if (c[k] != 0.0) acc += c[k] * integrate_base(x, delta);
    return acc;
  }

  std::vector<double> breakpoints(double a, double b) const {
    auto out = h[0].breakpoints(a, b);
    auto more = h[1].breakpoints(a, b);
    out.insert(out.end(), more.begin(), more.end());
    return out;
  }
};

/// lambda-shifted cocycle e^{lambda (t - s)} Phi(t, s, x).
inline DiagonalCocycle shift(DiagonalCocycle c, double lambda) {
  c.shift_lambda += lambda;
  return c;
}

/// C = (phi, Phi P); the projector is the identity for the full semiflow and
/// P_k for a restriction.
struct SkewEvolution {
  DiagonalCocycle cocycle;
  ProjectorFamily projector = ProjectorFamily::identity();
};

inline SkewEvolution shift(SkewEvolution c, double lambda) {
  c.cocycle = shift(c.cocycle, lambda);
  return c;
}

namespace detail {
inline void require_order(double t, double s) {
  require_domain(s >= 0.0 && t >= s, "cocycle: need t >= s >= 0");
}
}  // namespace detail

/// Phi(t, s, x) v for a vector already in log form.
inline LogVector apply(const DiagonalCocycle& cocycle, double t, double s, const BasePoint& x,
                       const LogVector& v) {
  detail::require_order(t, s);
  if (t == s) return v;
  return {v[0].scaled(cocycle.log_factor(0, t, s, x)), v[1].scaled(cocycle.log_factor(1, t, s, x))};
}

inline LogVector apply(const DiagonalCocycle& cocycle, double t, double s, const BasePoint& x,
                       const StateVector& v) {
  return apply(cocycle, t, s, x, v.to_log());
}

inline LogVector apply(const SkewEvolution& c, double t, double s, const BasePoint& x, const LogVector& v) {
  detail::require_order(t, s);
  return apply(c.cocycle, t, s, x, apply_matrix(c.projector(x), v));
}

inline LogVector apply(const SkewEvolution& c, double t, double s, const BasePoint& x, const StateVector& v) {
  return apply(c, t, s, x, v.to_log());
}

/// log ||Phi(t, s, x) v|| in the l1 norm.
inline double log_norm(const LogVector& w) { return log_sum_abs(w); }

/// Largest componentwise log discrepancy between two vectors; both-zero
/// components count as agreement and a zero/nonzero mismatch as infinite.
inline double log_discrepancy(const LogVector& a, const LogVector& b) {
  double r = 0.0;
  for (int k = 0; k < 2; ++k) {
    if (a[k].is_zero() && b[k].is_zero()) continue;
    if (a[k].is_zero() != b[k].is_zero() || a[k].sign != b[k].sign)
      return std::numeric_limits<double>::infinity();
    r = std::max(r, std::fabs(a[k].log_abs - b[k].log_abs));
  }
  return r;
}

/// Residual of Phi(t, s, phi(s, t0, x)) Phi(s, t0, x) v against Phi(t, t0, x) v.
inline double compose_residual(const SkewEvolution& c, double t, double s, double t0, const BasePoint& x,
                               const StateVector& v) {
  detail::require_domain(t0 >= 0.0 && s >= t0 && t >= s, "compose_residual: need t >= s >= t0 >= 0");
  const LogVector inner = apply(c, s, t0, x, v);
  const LogVector chained = apply(c, t, s, semiflow(s, t0, x), inner);
  const LogVector direct = apply(c, t, t0, x, v);
  return log_discrepancy(chained, direct);
}

}  // namespace skewdich
