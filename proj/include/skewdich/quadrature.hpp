#pragma once

// Adaptive Simpson quadrature, plain and log-space.

#include <algorithm>
#include <cmath>
#include <vector>

#include "skewdich/log_scalar.hpp"

namespace skewdich {
namespace quadrature {

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth, double& err) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    err += std::fabs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, err) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err);
}

}  // namespace detail

struct Result {
  double value = 0.0;
  double error = 0.0;  // sum of local Richardson estimates
};

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
template <class F>
Result adaptive_simpson(F f, double a, double b, double tol, int max_depth = 48) {
  Result r;
  if (b == a) return r;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  r.value = detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth, r.error);
  return r;
}

struct LogOptions {
  double panel_length = 0.5;
  double rel_tol = 1e-13;
  int max_depth = 40;
};

struct LogResult {
  double log_value = kNegInf;
  double rel_error = 0.0;  // estimated relative error of exp(log_value)
};

/// Integral of exp(log_f) over [a, b]. The interval is cut at `breakpoints`
/// and into panels no longer than `panel_length`; each panel is rescaled by
/// its own peak so integrands spanning hundreds of log-units stay finite.
template <class LogF>
LogResult integrate_log(LogF log_f, double a, double b, std::vector<double> breakpoints = {},
                        const LogOptions& opt = {}) {
  LogResult out;
  if (!(b > a)) return out;
  std::vector<double> cuts{a};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);

  LogSumAccumulator acc;
  LogSumAccumulator err_acc;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    if (!(hi > lo)) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / opt.panel_length)));
    const double h = (hi - lo) / panels;
    for (int k = 0; k < panels; ++k) {
      const double pa = lo + k * h;
      const double pb = (k + 1 == panels) ? hi : lo + (k + 1) * h;
      double ref = kNegInf;
      for (int j = 0; j <= 8; ++j) ref = std::max(ref, log_f(pa + (pb - pa) * j / 8.0));
      if (ref == kNegInf) continue;
      auto scaled = [&](double u) {
        const double lf = log_f(u);
        return lf == kNegInf ? 0.0 : std::exp(lf - ref);
      };
      const Result r = adaptive_simpson(scaled, pa, pb, opt.rel_tol * (pb - pa), opt.max_depth);
      if (r.value > 0.0) acc.add(ref + std::log(r.value));
      if (r.error > 0.0) err_acc.add(ref + std::log(r.error));
    }
  }
  out.log_value = acc.log_value();
  const double le = err_acc.log_value();
  out.rel_error = (out.log_value == kNegInf || le == kNegInf) ? 0.0 : std::exp(le - out.log_value);
  return out;
}

}  // namespace quadrature
}  // namespace skewdich
