#pragma once

// Sampling grids of time triples t >= s >= t0 and test vectors.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "skewdich/errors.hpp"
#include "skewdich/matrix.hpp"

namespace skewdich {

enum class Spacing { kLinear, kLogMix };

inline std::string to_string(Spacing s) { return s == Spacing::kLinear ? "linear" : "log-mix"; }

struct RangeSpec {
  double min = 0.0;
  double max = 60.0;
  int count = 60;
  Spacing spacing = Spacing::kLogMix;

  std::vector<double> values() const {
    detail::require_valid(count >= 2, "grid range: count < 2");
    detail::require_valid(max >= min && min >= 0.0, "grid range: need 0 <= min <= max");
    std::vector<double> out;
    auto linear = [&](int n) {
      for (int i = 0; i < n; ++i) out.push_back(min + (max - min) * i / (n - 1));
    };
    if (spacing == Spacing::kLinear) {
      linear(count);
    } else {
      const int n_lin = std::max(2, count / 2);
      const int n_log = std::max(2, count - n_lin);
      linear(n_lin);
      const double a = std::log1p(min);
      const double b = std::log1p(max);
      for (int i = 0; i < n_log; ++i) out.push_back(std::expm1(a + (b - a) * i / (n_log - 1)));
    }
    out.front() = min;
    out.push_back(max);
    return out;
  }
};

struct PointSample {
  double t;
  double s;
  double t0;
};

struct GridSpec {
  RangeSpec t_range;
  RangeSpec s_range;
  std::vector<double> t0_values{0.0, 1.0, 5.0, 20.0};
  bool t0_at_s = true;  // also sample t0 = s
  std::vector<StateVector> vectors{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  std::vector<double> extra_times{1.0};  // added to both axes when inside the range
  double s_floor = 0.0;                  // samples with s < s_floor are dropped
  double tol_log = 1e-9;

  static GridSpec exponential(double max = 60.0, int count = 60) {
    GridSpec g;
    g.t_range = {0.0, max, count, Spacing::kLogMix};
    g.s_range = g.t_range;
    return g;
  }

  static GridSpec polynomial(double max = 60.0, int count = 60) {
    GridSpec g;
    g.t_range = {1.0, max, count, Spacing::kLogMix};
    g.s_range = g.t_range;
    g.t0_values = {1.0, 2.0, 5.0, 20.0};
    g.s_floor = 1.0;
    return g;
  }

  /// The sub-grid of samples with s >= 1, on the same axes.
  GridSpec restricted_to_polynomial() const {
    GridSpec g = *this;
    g.s_floor = std::max(1.0, s_floor);
    return g;
  }

  std::vector<double> axis(const RangeSpec& r) const {
    auto v = r.values();
    for (double e : extra_times)
      if (e >= r.min && e <= r.max) v.push_back(e);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  std::vector<PointSample> samples() const {
    detail::require_valid(!vectors.empty(), "grid: no test vectors");
    const auto ts = axis(t_range);
    const auto ss = axis(s_range);
    std::vector<double> t0s = t0_values;
    std::sort(t0s.begin(), t0s.end());
    t0s.erase(std::unique(t0s.begin(), t0s.end()), t0s.end());
    std::vector<PointSample> out;
    for (double s : ss)
      for (double t : ts) {
        if (s < s_floor) continue;
        if (t < s) continue;
        bool have_s = false;
        for (double t0 : t0s) {
          if (t0 > s) break;
          have_s = have_s || t0 == s;
          out.push_back({t, s, t0});
        }
        if (t0_at_s && !have_s) out.push_back({t, s, s});
      }
    detail::require_valid(!out.empty(), "grid: no sample points with t >= s >= t0");
    return out;
  }
};

}  // namespace skewdich
