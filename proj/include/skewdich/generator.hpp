#pragma once

// Decreasing generator functions f whose translates make up the base space,
// together with their cumulative integrals u -> \int_0^u f.

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "skewdich/errors.hpp"
#include "skewdich/quadrature.hpp"

namespace skewdich {

/// f(u) = limit + amplitude * e^{-rate u}
struct OnePlusExpNeg {
  double limit = 1.0;
  double amplitude = 1.0;
  double rate = 1.0;
  friend bool operator==(const OnePlusExpNeg&, const OnePlusExpNeg&) = default;
};

/// f(u) = scale / (u + shift); limit 0.
struct ReciprocalShift {
  double scale = 1.0;
  double shift = 1.0;
  friend bool operator==(const ReciprocalShift&, const ReciprocalShift&) = default;
};

/// f(u) = value
struct ConstantGenerator {
  double value = 1.0;
  friend bool operator==(const ConstantGenerator&, const ConstantGenerator&) = default;
};

/// Cumulative integral of an arbitrary generator, built lazily on a fixed
/// cell grid by adaptive Simpson. Every query is answered from the same
/// cumulative function, so split integrals telescope.
class QuadratureCumulative {
 public:
  QuadratureCumulative(std::function<double(double)> eval, double cell = 0.25,
                       double horizon = 1e6)
      : eval_(std::move(eval)), cell_(cell), horizon_(horizon), knots_{0.0} {}

  double eval(double u) const { return eval_(u); }

  double operator()(double u) const {
    detail::require_domain(u >= 0.0, "cumulative: negative argument");
    detail::require_domain(u <= horizon_, "cumulative: argument beyond quadrature horizon");
    const auto k = static_cast<std::size_t>(u / cell_);
    double base;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      extend_locked(k);
      base = knots_[k];
    }
    const double a = static_cast<double>(k) * cell_;
    if (u == a) return base;
    return base + quadrature::adaptive_simpson(eval_, a, u, 1e-15).value;
  }

  /// Pre-builds the knot table up to `u`; after this, queries below `u`
  /// only read the table.
  void freeze(double u) const {
    std::lock_guard<std::mutex> lock(mutex_);
    extend_locked(static_cast<std::size_t>(u / cell_) + 1);
  }

 private:
  void extend_locked(std::size_t k) const {
    while (knots_.size() <= k) {
      const double a = static_cast<double>(knots_.size() - 1) * cell_;
      knots_.push_back(knots_.back() +
                       quadrature::adaptive_simpson(eval_, a, a + cell_, 1e-15).value);
    }
  }

  std::function<double(double)> eval_;
  double cell_;
  double horizon_;
  mutable std::mutex mutex_;
  mutable std::vector<double> knots_;
};

/// A generator backed by quadrature instead of a closed-form antiderivative.
struct TabulatedGenerator {
  std::shared_ptr<const QuadratureCumulative> cumulative;
  double limit = 0.0;
  std::string label = "tabulated";
  friend bool operator==(const TabulatedGenerator& a, const TabulatedGenerator& b) {
    return a.cumulative == b.cumulative;
  }
};

class GeneratorSpec {
 public:
  using Variant = std::variant<OnePlusExpNeg, ReciprocalShift, ConstantGenerator, TabulatedGenerator>;

  GeneratorSpec() : impl_(OnePlusExpNeg{}) {}
  explicit GeneratorSpec(Variant v) : impl_(std::move(v)) { validate(); }

  static GeneratorSpec one_plus_exp_neg(double limit = 1.0, double amplitude = 1.0, double rate = 1.0) {
    return GeneratorSpec(OnePlusExpNeg{limit, amplitude, rate});
  }
  static GeneratorSpec reciprocal_shift(double scale = 1.0, double shift = 1.0) {
    return GeneratorSpec(ReciprocalShift{scale, shift});
  }
  static GeneratorSpec constant(double value) { return GeneratorSpec(ConstantGenerator{value}); }
  static GeneratorSpec tabulated(std::function<double(double)> f, double limit, std::string label = "tabulated") {
    return GeneratorSpec(TabulatedGenerator{std::make_shared<QuadratureCumulative>(std::move(f)), limit,
                                            std::move(label)});
  }

  double eval(double u) const {
    return std::visit(
        [u](const auto& g) -> double {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, OnePlusExpNeg>)
            return g.limit + g.amplitude * std::exp(-g.rate * u);
          else if constexpr (std::is_same_v<T, ReciprocalShift>)
            return g.scale / (u + g.shift);
          else if constexpr (std::is_same_v<T, ConstantGenerator>)
            return g.value;
          else
            return g.cumulative->eval(u);
        },
        impl_);
  }

  double cumulative(double u) const {
    detail::require_domain(u >= 0.0, "cumulative: negative argument");
    return std::visit(
        [u](const auto& g) -> double {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, OnePlusExpNeg>)
            return g.limit * u - g.amplitude / g.rate * std::expm1(-g.rate * u);
          else if constexpr (std::is_same_v<T, ReciprocalShift>)
            return g.scale * std::log1p(u / g.shift);
          else if constexpr (std::is_same_v<T, ConstantGenerator>)
            return g.value * u;
          else
            return (*g.cumulative)(u);
        },
        impl_);
  }

  /// \int_a^b f for 0 <= a <= b, evaluated so that nearby large arguments
  /// do not lose precision to cancellation.
  double integral(double a, double b) const {
    detail::require_domain(a >= 0.0 && b >= a, "integral: need 0 <= a <= b");
    return std::visit(
        [&](const auto& g) -> double {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, OnePlusExpNeg>)
            return g.limit * (b - a) - g.amplitude / g.rate * std::exp(-g.rate * a) * std::expm1(-g.rate * (b - a));
          else if constexpr (std::is_same_v<T, ReciprocalShift>)
            return g.scale * std::log1p((b - a) / (a + g.shift));
          else if constexpr (std::is_same_v<T, ConstantGenerator>)
            return g.value * (b - a);
          else
            return (*g.cumulative)(b) - (*g.cumulative)(a);
        },
        impl_);
  }

  double limit() const {
    return std::visit(
        [](const auto& g) -> double {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, OnePlusExpNeg>)
            return g.limit;
          else if constexpr (std::is_same_v<T, ReciprocalShift>)
            return 0.0;
          else if constexpr (std::is_same_v<T, ConstantGenerator>)
            return g.value;
          else
            return g.limit;
        },
        impl_);
  }

  double sup_f0() const { return eval(0.0); }

  std::string kind() const {
    return std::visit(
        [](const auto& g) -> std::string {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, OnePlusExpNeg>)
            return "one_plus_exp_neg";
          else if constexpr (std::is_same_v<T, ReciprocalShift>)
            return "reciprocal_shift";
          else if constexpr (std::is_same_v<T, ConstantGenerator>)
            return "constant";
          else
            return g.label;
        },
        impl_);
  }

  const Variant& variant() const { return impl_; }

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;

 private:
  void validate() const {
    std::visit(
        [](const auto& g) {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, OnePlusExpNeg>) {
            detail::require_valid(g.limit >= 0.0 && g.amplitude >= 0.0 && g.rate > 0.0,
                                  "one_plus_exp_neg: need limit >= 0, amplitude >= 0, rate > 0");
          } else if constexpr (std::is_same_v<T, ReciprocalShift>) {
            detail::require_valid(g.scale > 0.0 && g.shift > 0.0, "reciprocal_shift: need scale, shift > 0");
          } else if constexpr (std::is_same_v<T, ConstantGenerator>) {
            detail::require_valid(g.value > 0.0, "constant: need value > 0");
          } else {
            detail::require_valid(g.cumulative != nullptr && g.limit >= 0.0, "tabulated: missing cumulative");
          }
        },
        impl_);
  }

  Variant impl_;
};

}  // namespace skewdich
