#pragma once

// Sign plus log-magnitude representation of a real number. Cocycle values in
// the gallery reach e^{5120} and beyond, so every magnitude is carried in
// log-space.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace skewdich {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct LogScalar {
  int sign = 0;              // -1, 0, +1
  double log_abs = kNegInf;  // -inf iff sign == 0

  static LogScalar zero() { return {}; }
  static LogScalar from_log(double log_abs, int sign = 1) {
    if (sign == 0 || log_abs == kNegInf) return {};
    return {sign > 0 ? 1 : -1, log_abs};
  }
  static LogScalar from_double(double v) {
    if (v == 0.0) return {};
    return {v > 0 ? 1 : -1, std::log(std::fabs(v))};
  }

  bool is_zero() const { return sign == 0; }
  double to_double() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

  friend LogScalar operator*(LogScalar a, LogScalar b) {
    if (a.sign == 0 || b.sign == 0) return {};
    return {a.sign * b.sign, a.log_abs + b.log_abs};
  }

  // Scale by e^{log_factor}.
  LogScalar scaled(double log_factor) const {
    if (sign == 0) return {};
    return {sign, log_abs + log_factor};
  }

  friend LogScalar operator-(LogScalar a) { return {-a.sign, a.log_abs}; }

  friend LogScalar operator+(LogScalar a, LogScalar b) {
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    if (a.log_abs < b.log_abs) std::swap(a, b);
    const double d = b.log_abs - a.log_abs;  // <= 0
    if (a.sign == b.sign) return {a.sign, a.log_abs + std::log1p(std::exp(d))};
    if (d == 0.0) return {};
    return {a.sign, a.log_abs + std::log1p(-std::exp(d))};
  }

  friend LogScalar operator-(LogScalar a, LogScalar b) { return a + (-b); }

  friend bool operator==(const LogScalar&, const LogScalar&) = default;
};

using LogVector = std::array<LogScalar, 2>;

/// log of a sum of magnitudes; -inf for an empty or all-zero input.
template <class Range>
double log_sum_abs(const Range& values) {
  double m = kNegInf;
  for (const LogScalar& v : values) m = std::max(m, v.log_abs);
  if (m == kNegInf) return kNegInf;
  double acc = 0.0;
  for (const LogScalar& v : values)
    if (!v.is_zero()) acc += std::exp(v.log_abs - m);
  return m + std::log(acc);
}

/// Compensated accumulator for a sum of positive terms given by their logs.
class LogSumAccumulator {
 public:
  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (log_term > max_) {
      if (max_ != kNegInf) {
        const double r = std::exp(max_ - log_term);
        sum_ *= r;
        comp_ *= r;
      }
      max_ = log_term;
    }
    const double y = std::exp(log_term - max_) - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double log_value() const {
    if (max_ == kNegInf || sum_ <= 0.0) return kNegInf;
    return max_ + std::log(sum_);
  }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace skewdich
