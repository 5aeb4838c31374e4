#pragma once

// Closed-form scalar functions of time used as the h_k(t) parts of diagonal
// cocycles and as log-gauges. An Expression is a sum of terms drawn from a
// small fixed vocabulary.

#include <cmath>
#include <string>
#include <vector>

#include "skewdich/errors.hpp"

namespace skewdich {

enum class TermKind {
  kPoly,          // sum_i coeffs[i] t^i
  kTSinT,         // coef * t sin t
  kTCosT,         // coef * t cos t
  kLogGKnots,     // coef * log g(t), g log-linear between spike knots
  kLogPolyShift,  // coef * log(sum_i coeffs[i] t^i)
  kSinLog,        // coef * (base - amp sin ln(t+1)) ln(t+1)
};

inline std::string to_string(TermKind k) {
  switch (k) {
    case TermKind::kPoly: return "poly";
    case TermKind::kTSinT: return "t_sin_t";
    case TermKind::kTCosT: return "t_cos_t";
    case TermKind::kLogGKnots: return "log_g_knots";
    case TermKind::kLogPolyShift: return "log_poly_shift";
    case TermKind::kSinLog: return "sin_log";
  }
  return "?";
}

inline TermKind term_kind_from_string(const std::string& s) {
  if (s == "poly") return TermKind::kPoly;
  if (s == "t_sin_t") return TermKind::kTSinT;
  if (s == "t_cos_t") return TermKind::kTCosT;
  if (s == "log_g_knots") return TermKind::kLogGKnots;
  if (s == "log_poly_shift") return TermKind::kLogPolyShift;
  if (s == "sin_log") return TermKind::kSinLog;
  throw ValidationError("unknown expression kind: " + s);
}

/// Spike knots of the gap function: log g(n) = n 4^n and log g(n + 4^{-n}) = 0
/// for n = 1..n_max, log g(0) = 0, log-linear in between, and g = 1 after the
/// last spike.
struct SpikeKnots {
  std::vector<double> times;
  std::vector<double> log_values;

  static SpikeKnots build(int n_max) {
    SpikeKnots k;
    k.times.push_back(0.0);
    k.log_values.push_back(0.0);
    for (int n = 1; n <= n_max; ++n) {
      const double four_n = std::ldexp(1.0, 2 * n);
      k.times.push_back(n);
      k.log_values.push_back(n * four_n);
      k.times.push_back(n + 1.0 / four_n);
      k.log_values.push_back(0.0);
    }
    return k;
  }

  double operator()(double t) const {
    if (t <= times.front() || t >= times.back()) return 0.0;
    std::size_t lo = 0;
    std::size_t hi = times.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (times[mid] <= t ? lo : hi) = mid;
    }
    if (t == times[lo]) return log_values[lo];
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return log_values[lo] + w * (log_values[hi] - log_values[lo]);
  }
};

struct Term {
  TermKind kind = TermKind::kPoly;
  double coef = 1.0;
  std::vector<double> coeffs;  // poly, log_poly_shift
  int n_max = 6;               // log_g_knots
  double base = 3.0;           // sin_log
  double amp = 1.0;            // sin_log
  SpikeKnots knots;            // derived, log_g_knots

  static Term poly(std::vector<double> c) {
    Term t;
    t.kind = TermKind::kPoly;
    t.coeffs = std::move(c);
    return t;
  }
  static Term t_sin_t(double coef) {
    Term t;
    t.kind = TermKind::kTSinT;
    t.coef = coef;
    return t;
  }
  static Term t_cos_t(double coef) {
    Term t;
    t.kind = TermKind::kTCosT;
    t.coef = coef;
    return t;
  }
  static Term log_g_knots(double coef, int n_max = 6) {
    Term t;
    t.kind = TermKind::kLogGKnots;
    t.coef = coef;
    t.n_max = n_max;
    t.knots = SpikeKnots::build(n_max);
    return t;
  }
  static Term log_poly_shift(double coef, std::vector<double> c) {
    Term t;
    t.kind = TermKind::kLogPolyShift;
    t.coef = coef;
    t.coeffs = std::move(c);
    return t;
  }
  static Term sin_log(double coef, double base = 3.0, double amp = 1.0) {
    Term t;
    t.kind = TermKind::kSinLog;
    t.coef = coef;
    t.base = base;
    t.amp = amp;
    return t;
  }

  double operator()(double t) const {
    switch (kind) {
      case TermKind::kPoly: return horner(t);
      case TermKind::kTSinT: return coef * t * std::sin(t);
      case TermKind::kTCosT: return coef * t * std::cos(t);
      case TermKind::kLogGKnots: return coef * knots(t);
      case TermKind::kLogPolyShift: {
        const double p = horner(t);
        detail::require_domain(p > 0.0, "log_poly_shift: polynomial not positive");
        return coef * std::log(p);
      }
      case TermKind::kSinLog: {
        const double L = std::log1p(t);
        return coef * (base - amp * std::sin(L)) * L;
      }
    }
    return 0.0;
  }

 private:
  double horner(double t) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
    return acc;
  }
};

class Expression {
 public:
  Expression() = default;
  Expression(std::initializer_list<Term> terms) : terms_(terms) {}
  explicit Expression(std::vector<Term> terms) : terms_(std::move(terms)) {}

  double operator()(double t) const {
    double acc = 0.0;
    for (const Term& term : terms_) acc += term(t);
    return acc;
  }

  bool empty() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  /// Kinks inside (a, b) where the expression is only piecewise smooth.
  std::vector<double> breakpoints(double a, double b) const {
    std::vector<double> out;
    for (const Term& term : terms_)
      if (term.kind == TermKind::kLogGKnots)
        for (double k : term.knots.times)
          if (k > a && k < b) out.push_back(k);
    return out;
  }

  Expression operator-() const {
    Expression e = *this;
    for (Term& term : e.terms_) {
      if (term.kind == TermKind::kPoly)
        for (double& c : term.coeffs) c = -c;
      else
        term.coef = -term.coef;
    }
    return e;
  }

  Expression operator+(const Expression& o) const {
    Expression e = *this;
    e.terms_.insert(e.terms_.end(), o.terms_.begin(), o.terms_.end());
    return e;
  }

 private:
  std::vector<Term> terms_;
};

}  // namespace skewdich
