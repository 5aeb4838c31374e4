#pragma once

// The base space X: translates x = f_offset of a decreasing generator f, the
// constant-limit closure point (offset = inf), the evolution semiflow
// phi(t, s, x) = x_{t-s} and the metric of uniform convergence on compacts.

#include <algorithm>
#include <cmath>
#include <limits>

#include "skewdich/errors.hpp"
#include "skewdich/generator.hpp"

namespace skewdich {

inline constexpr double kInfOffset = std::numeric_limits<double>::infinity();

struct BasePoint {
  GeneratorSpec generator;
  double offset = 0.0;  // in [0, inf]

  bool is_limit() const { return std::isinf(offset); }
  friend bool operator==(const BasePoint&, const BasePoint&) = default;
};

struct TimePair {
  double t;
  double s;
};

/// x(tau) = f(offset + tau); the limit point evaluates to l everywhere.
inline double evaluate_point(const BasePoint& x, double tau) {
  detail::require_domain(tau >= 0.0, "evaluate_point: tau < 0");
  if (x.is_limit()) return x.generator.limit();
  return x.generator.eval(x.offset + tau);
}

/// phi(t, s, x) = x_{t-s}
inline BasePoint semiflow(double t, double s, const BasePoint& x) {
  detail::require_domain(s >= 0.0 && t >= s, "semiflow: need t >= s >= 0");
  return BasePoint{x.generator, x.offset + (t - s)};
}

/// \int_0^delta x(u) du, i.e. \int_s^t x(tau - s) dtau for delta = t - s.
inline double integrate_base(const BasePoint& x, double delta) {
  detail::require_domain(delta >= 0.0, "integrate_base: delta < 0");
  if (delta == 0.0) return 0.0;
  if (x.is_limit()) return x.generator.limit() * delta;
  return x.generator.integral(x.offset, x.offset + delta);
}

/// Truncated series sum_{n=1}^{n_terms} 2^{-n} d_n / (1 + d_n), where d_n is
/// the sup of |x - y| over [0, n] sampled uniformly with both endpoints.
inline double metric(const BasePoint& x, const BasePoint& y, int n_terms = 40, int samples_per_unit = 64) {
  detail::require_valid(n_terms >= 1, "metric: n_terms < 1");
  detail::require_valid(samples_per_unit >= 2, "metric: samples_per_unit < 2");
  double total = 0.0;
  double sup = 0.0;  // sup over [0, n] is nondecreasing in n
  double covered = -1.0;
  for (int n = 1; n <= n_terms; ++n) {
    const int count = samples_per_unit;
    for (int k = 0; k <= count; ++k) {
      const double tau = (n - 1) + static_cast<double>(k) / count;
      if (tau <= covered) continue;
      sup = std::max(sup, std::fabs(evaluate_point(x, tau) - evaluate_point(y, tau)));
    }
    covered = n;
    total += std::ldexp(sup / (1.0 + sup), -n);
  }
  return total;
}

}  // namespace skewdich
