#pragma once

// Minimax fitting over families of affine log-margins.
//
// Every class inequality on a grid becomes a set of rows
//     r_p + theta_a * a_p - theta_b * b_p <= level,
// so the worst margin g(theta_a, theta_b) = max_p(...) is convex and
// piecewise linear. Everything here is bisection on that structure.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "skewdich/log_scalar.hpp"

namespace skewdich {

struct Bounds {
  double lo;
  double hi;
};

class AffineRows {
 public:
  void add(double r, double a, double b) {
    r_.push_back(r);
    a_.push_back(a);
    b_.push_back(b);
  }

  std::size_t size() const { return r_.size(); }
  bool empty() const { return r_.empty(); }

  /// Keeps only the largest r for each distinct (a, b).
  void compact() {
    std::vector<std::size_t> idx(size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
      if (a_[i] != a_[j]) return a_[i] < a_[j];
      if (b_[i] != b_[j]) return b_[i] < b_[j];
      return r_[i] > r_[j];
    });
    AffineRows out;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const std::size_t i = idx[k];
      if (k > 0) {
        const std::size_t p = idx[k - 1];
        if (a_[p] == a_[i] && b_[p] == b_[i]) continue;
      }
      out.add(r_[i], a_[i], b_[i]);
    }
    *this = std::move(out);
  }

  double value(double ta, double tb) const { return eval(ta, tb).first; }

  /// (max value, argmax row)
  std::pair<double, std::size_t> eval(double ta, double tb) const {
    double best = kNegInf;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < r_.size(); ++i) {
      const double v = r_[i] + ta * a_[i] - tb * b_[i];
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    return {best, arg};
  }

  double a(std::size_t i) const { return a_[i]; }
  double b(std::size_t i) const { return b_[i]; }

 private:
  std::vector<double> r_, a_, b_;
};

namespace minimax {

inline constexpr int kIterations = 200;

/// argmin over ta in [lo, hi] of g(ta, tb) for fixed tb.
inline double argmin_a(const AffineRows& rows, double tb, Bounds box) {
  double lo = box.lo, hi = box.hi;
  for (int it = 0; it < kIterations && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++it) {
    const double m = 0.5 * (lo + hi);
    const auto [v, i] = rows.eval(m, tb);
    const double slope = rows.a(i);
    if (slope > 0) hi = m;
    else if (slope < 0) lo = m;
    else return m;
  }
  const double vlo = rows.value(lo, tb);
  const double vhi = rows.value(hi, tb);
  return vlo <= vhi ? lo : hi;
}

/// argmin over tb in [lo, hi] of g(ta, tb) for fixed ta.
inline double argmin_b(const AffineRows& rows, double ta, Bounds box) {
  double lo = box.lo, hi = box.hi;
  for (int it = 0; it < kIterations && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++it) {
    const double m = 0.5 * (lo + hi);
    const auto [v, i] = rows.eval(ta, m);
    const double slope = -rows.b(i);
    if (slope > 0) hi = m;
    else if (slope < 0) lo = m;
    else return m;
  }
  const double vlo = rows.value(ta, lo);
  const double vhi = rows.value(ta, hi);
  return vlo <= vhi ? lo : hi;
}

/// h(ta) = min over tb of g(ta, tb); convex in ta.
inline double min_over_b(const AffineRows& rows, double ta, Bounds bbox) {
  return rows.value(ta, argmin_b(rows, ta, bbox));
}

struct Point2 {
  double a;
  double b;
  double value;
};

/// Joint minimiser over the box: golden section on ta of h(ta).
inline Point2 argmin_box(const AffineRows& rows, Bounds abox, Bounds bbox, bool use_b) {
  auto h = [&](double ta) { return use_b ? min_over_b(rows, ta, bbox) : rows.value(ta, bbox.lo); };
  if (!use_b) {
    const double ta = argmin_a(rows, bbox.lo, abox);
    return {ta, bbox.lo, rows.value(ta, bbox.lo)};
  }
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = abox.lo, hi = abox.hi;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = h(x1), f2 = h(x2);
  for (int it = 0; it < 120 && hi - lo > 1e-13 * std::max(1.0, std::fabs(hi)); ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = h(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = h(x2);
    }
  }
  double best = 0.5 * (lo + hi);
  for (double c : {abox.lo, abox.hi, lo, hi})
    if (h(c) < h(best)) best = c;
  const double tb = argmin_b(rows, best, bbox);
  return {best, tb, rows.value(best, tb)};
}

/// Largest x in [from, hi] with f(x) <= level, given f(from) <= level and f
/// convex (so the feasible set is an interval containing `from`).
template <class F>
double largest_feasible(F f, double from, double hi, double level) {
  if (f(hi) <= level) return hi;
  double lo = from;
  for (int it = 0; it < kIterations && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++it) {
    const double m = 0.5 * (lo + hi);
    (f(m) <= level ? lo : hi) = m;
  }
  return lo;
}

/// Smallest x in [lo, from] with f(x) <= level, given f(from) <= level.
template <class F>
double smallest_feasible(F f, double lo, double from, double level) {
  if (f(lo) <= level) return lo;
  double hi = from;
  for (int it = 0; it < kIterations && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++it) {
    const double m = 0.5 * (lo + hi);
    (f(m) <= level ? hi : lo) = m;
  }
  return hi;
}

}  // namespace minimax
}  // namespace skewdich
