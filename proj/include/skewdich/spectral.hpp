#pragma once

// Parabolic Neumann example in the cosine basis e_0 = 1, e_n = sqrt(2) cos(n pi y):
// S(t) scales mode n by e^{-n^2 pi^2 t}, and the skew-evolution
// Phi(t,s,x) = S(\int_0^{t-s} x) with the base point translated at composition.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <vector>

#include "skewdich/base_space.hpp"
#include "skewdich/errors.hpp"
#include "skewdich/log_scalar.hpp"

namespace skewdich {

inline constexpr int kDefaultModes = 32;

struct ModeVector {
  std::vector<double> a;

  static ModeVector zeros(int n_modes = kDefaultModes) { return {std::vector<double>(n_modes, 0.0)}; }
  static ModeVector basis(int n, int n_modes = kDefaultModes) {
    detail::require_valid(n >= 0 && n < n_modes, "mode vector: index out of range");
    ModeVector v = zeros(n_modes);
    v.a[n] = 1.0;
    return v;
  }

  int size() const { return static_cast<int>(a.size()); }

  /// L2 norm; the basis is orthonormal.
  double norm() const {
    double scale = 0.0;
    for (double c : a) scale = std::max(scale, std::fabs(c));
    if (scale == 0.0) return 0.0;
    double acc = 0.0;
    for (double c : a) acc += (c / scale) * (c / scale);
    return scale * std::sqrt(acc);
  }

  /// v(y) = a_0 + sum sqrt(2) a_n cos(n pi y)
  double synthesize(double y) const {
    double acc = a.empty() ? 0.0 : a[0];
    for (int n = 1; n < size(); ++n) acc += std::numbers::sqrt2 * a[n] * std::cos(n * std::numbers::pi * y);
    return acc;
  }
};

namespace detail {

inline ModeVector scale_modes(const ModeVector& v, double heat_time) {
  ModeVector out = v;
  const double k = std::numbers::pi * std::numbers::pi * heat_time;
  for (int n = 1; n < out.size(); ++n) {
    if (out.a[n] == 0.0) continue;
    const LogScalar c = LogScalar::from_double(out.a[n]).scaled(-static_cast<double>(n) * n * k);
    out.a[n] = c.to_double();
  }
  return out;
}

}  // namespace detail

inline ModeVector semigroup_apply(const ModeVector& v, double t) {
  detail::require_domain(t >= 0.0, "semigroup_apply: t < 0");
  return detail::scale_modes(v, t);
}

inline ModeVector spectral_cocycle_apply(double t, double s, const BasePoint& x, const ModeVector& v) {
  detail::require_domain(s >= 0.0 && t >= s, "spectral cocycle: need t >= s >= 0");
  if (t == s) return v;
  return detail::scale_modes(v, integrate_base(x, t - s));
}

/// Largest per-mode log discrepancy of Phi(t,s,phi(s,t0,x)) Phi(s,t0,x) v
/// against Phi(t,t0,x) v. Each mode's log-factor is -n^2 pi^2 I, so the
/// comparison is done on exponents.
inline double spectral_compose_residual(double t, double s, double t0, const BasePoint& x, int n_modes = kDefaultModes) {
  detail::require_domain(t0 >= 0.0 && s >= t0 && t >= s, "spectral compose: need t >= s >= t0 >= 0");
  const double i_inner = integrate_base(x, s - t0);
  const double i_outer = integrate_base(semiflow(s, t0, x), t - s);
  const double i_direct = integrate_base(x, t - t0);
  const double k = std::numbers::pi * std::numbers::pi;
  double worst = 0.0;
  for (int n = 1; n < n_modes; ++n) {
    const double nn = static_cast<double>(n) * n * k;
    worst = std::max(worst, std::fabs(nn * (i_inner + i_outer) - nn * i_direct));
  }
  return worst;
}

/// CSV rows "t,y,v" sampling v(t, y) = Phi(t, 0, x) v0 at the given times.
inline void write_spectral_csv(std::ostream& os, const ModeVector& v0, const BasePoint& x,
                               const std::vector<double>& times, int y_samples) {
  detail::require_valid(y_samples >= 2, "spectral csv: need at least 2 y samples");
  os << "t,y,v\n";
  char buf[96];
  for (double t : times) {
    const ModeVector vt = spectral_cocycle_apply(t, 0.0, x, v0);
    for (int j = 0; j < y_samples; ++j) {
      const double y = static_cast<double>(j) / (y_samples - 1);
      std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e\n", t, y, vt.synthesize(y));
      os << buf;
    }
  }
}

}  // namespace skewdich
