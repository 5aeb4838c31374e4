#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "skewdich/base_space.hpp"
#include "skewdich/log_scalar.hpp"

namespace skewdich {

/// v = (v1, v2) in R^2 with the norm |v1| + |v2|.
struct StateVector {
  double v1 = 0.0;
  double v2 = 0.0;

  double operator[](int k) const { return k == 0 ? v1 : v2; }
  double norm() const { return std::fabs(v1) + std::fabs(v2); }
  LogVector to_log() const { return {LogScalar::from_double(v1), LogScalar::from_double(v2)}; }
  friend bool operator==(const StateVector&, const StateVector&) = default;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

inline Matrix2 identity2() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }
inline Matrix2 zero2() { return {{{0.0, 0.0}, {0.0, 0.0}}}; }

inline Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
  Matrix2 c = zero2();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
  Matrix2 c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][j] - b[i][j];
  return c;
}

inline double max_abs_entry(const Matrix2& a) {
  double m = 0.0;
  for (const auto& row : a)
    for (double v : row) m = std::max(m, std::fabs(v));
  return m;
}

/// P w in log arithmetic.
inline LogVector apply_matrix(const Matrix2& m, const LogVector& w) {
  LogVector out;
  for (int i = 0; i < 2; ++i) {
    LogScalar acc;
    for (int j = 0; j < 2; ++j) acc = acc + LogScalar::from_double(m[i][j]) * w[j];
    out[i] = acc;
  }
  return out;
}

/// x -> P(x), a projection on V for every base point.
class ProjectorFamily {
 public:
  ProjectorFamily() : fn_([](const BasePoint&) { return identity2(); }) {}
  explicit ProjectorFamily(std::function<Matrix2(const BasePoint&)> fn, bool constant = false)
      : fn_(std::move(fn)), constant_(constant) {}

  static ProjectorFamily constant(const Matrix2& m) {
    return ProjectorFamily([m](const BasePoint&) { return m; }, true);
  }
  static ProjectorFamily identity() { return constant(identity2()); }

  Matrix2 operator()(const BasePoint& x) const { return fn_(x); }
  bool is_constant() const { return constant_; }

 private:
  std::function<Matrix2(const BasePoint&)> fn_;
  bool constant_ = true;
};

}  // namespace skewdich
