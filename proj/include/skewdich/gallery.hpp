#pragma once

// Named instances: diagonal cocycles with coordinate projectors, their
// claimed classifications, sampling hints and registered witness sequences.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "skewdich/cocycle.hpp"
#include "skewdich/dichotomy.hpp"
#include "skewdich/errors.hpp"
#include "skewdich/generator.hpp"
#include "skewdich/grid.hpp"
#include "skewdich/projectors.hpp"

namespace skewdich {

struct Claim {
  DichotomyClass cls;
  Verdict verdict;
  std::optional<ClassParams> params;
};

struct Instance {
  std::string name;
  std::string description;
  SkewEvolution evolution;
  ProjectorPair pair = coordinate_projectors();
  BasePoint x0;
  GridSpec grid = GridSpec::exponential();
  std::vector<WitnessSpec> witnesses;
  std::vector<Claim> claims;

  const Claim* claim(DichotomyClass c) const {
    for (const Claim& cl : claims)
      if (cl.cls == c) return &cl;
    return nullptr;
  }
  const WitnessSpec* witness(const std::string& witness_name, DichotomyClass c) const {
    for (const WitnessSpec& w : witnesses)
      if (w.name == witness_name && w.cls == c) return &w;
    return nullptr;
  }
};

struct InstanceOptions {
  std::optional<GeneratorSpec> generator;
  double alpha1 = -1.0;  // ex21
  double alpha2 = 1.0;
};

inline const std::vector<std::string>& gallery_names() {
  static const std::vector<std::string> names{"ex21",        "bved",       "ed_gap",        "upd",
                                              "bvpd",        "bvpd_osc",   "pd_swapped",    "pd_swapped_l0",
                                              "bvpd_osc_l0", "synth_ed",   "pure_growth"};
  return names;
}

/// The seven instances covering the examples of the theory.
inline const std::vector<std::string>& core_gallery_names() {
  static const std::vector<std::string> names{"ex21", "bved", "ed_gap", "upd", "bvpd", "bvpd_osc", "pd_swapped"};
  return names;
}

namespace detail {

inline DiagonalCocycle antisymmetric(const Expression& log_g, double c1 = -1.0, double c2 = 1.0) {
  DiagonalCocycle c;
  c.h = {-log_g, log_g};
  c.c = {c1, c2};
  return c;
}

inline WitnessSpec witness(std::string name, DichotomyClass cls, WitnessKind kind, int n_min, int n_max) {
  WitnessSpec w;
  w.name = std::move(name);
  w.cls = cls;
  w.kind = kind;
  w.n_min = n_min;
  w.n_max = n_max;
  return w;
}

inline WitnessSpec ray(DichotomyClass cls, double s0 = 1.0, double step = 5.0, int n_max = 20) {
  WitnessSpec w = witness("ray", cls, WitnessKind::kRay, 1, n_max);
  w.s0 = s0;
  w.step = step;
  return w;
}

}  // namespace detail

inline Instance make_instance(const std::string& name, const InstanceOptions& opt = {}) {
  using C = DichotomyClass;
  using V = Verdict;
  Instance in;
  in.name = name;
  const GeneratorSpec gen = opt.generator.value_or(name.ends_with("_l0") ? GeneratorSpec::reciprocal_shift()
                                                                       : GeneratorSpec::one_plus_exp_neg());
  in.x0 = BasePoint{gen, 0.0};
  const double l = gen.limit();
  DiagonalCocycle& c = in.evolution.cocycle;

  if (name == "ex21") {
    in.description = "Phi = diag(exp(a1 I), exp(a2 I)), I the base integral";
    detail::require_valid(std::isfinite(opt.alpha1) && std::isfinite(opt.alpha2), "ex21: bad exponents");
    c.c = {opt.alpha1, opt.alpha2};
  } else if (name == "bved") {
    in.description = "h1 = t sin t - 2t, h2 = 3t - 2t cos t, c = (-1, +1)";
    c.h = {Expression{Term::t_sin_t(1.0), Term::poly({0.0, -2.0})},
           Expression{Term::poly({0.0, 3.0}), Term::t_cos_t(-2.0)}};
    c.c = {-1.0, 1.0};
    in.witnesses = {detail::witness("sin-peaks", C::kUED, WitnessKind::kSinPeaks, 1, 12),
                    detail::witness("cos-valleys", C::kUED, WitnessKind::kCosValleys, 1, 12)};
    in.witnesses[0].closed_form_increment = 2 * std::numbers::pi;
    in.witnesses[1].closed_form_increment = 8 * std::numbers::pi;
    in.claims = {{C::kUED, V::kViolated, {}},
                 {C::kBVED, V::kCertified, ClassParams::bved(0.0, 1 + l, 3 + l, 1 + l, 1 + l)},
                 {C::kED, V::kCertified, {}}};
  } else if (name == "ed_gap") {
    in.description = "log g piecewise log-linear through (n, n 4^n), (n + 4^-n, 0); h = -+(log g + t)";
    const Expression log_g{Term::log_g_knots(1.0)};
    c = detail::antisymmetric(log_g + Expression{Term::poly({0.0, 1.0})});
    const std::vector<double> knots = log_g.terms()[0].knots.times;
    in.grid.extra_times.insert(in.grid.extra_times.end(), knots.begin(), knots.end());
    in.witnesses = {detail::witness("knot-drop", C::kBVED, WitnessKind::kKnotDrop, 1, 6),
                    detail::witness("knot-drop", C::kBVPD, WitnessKind::kKnotDrop, 1, 6)};
    in.claims = {{C::kBVED, V::kViolated, {}},
                 {C::kED, V::kCertified, ClassParams::ed(0.0, 1 + l, 1 + l, 0.0, 1 + l, 1 + l, log_g)},
                 {C::kBVPD, V::kViolated, {}},
                 {C::kPD, V::kCertified, {}}};
  } else if (name == "upd") {
    in.description = "g = t^2 + 1, Phi = diag(g(s)/g(t) e^{-I}, g(t)/g(s) e^{I})";
    c = detail::antisymmetric(Expression{Term::log_poly_shift(1.0, {1.0, 0.0, 1.0})});
    in.witnesses = {detail::ray(C::kUED)};
    in.claims = {{C::kUPD, V::kCertified, {}}, {C::kUED, V::kViolated, {}}};
  } else if (name == "bvpd") {
    in.description = "g = t + 1, Phi = diag(g(s)/g(t) e^{-I}, g(t)/g(s) e^{I})";
    c = detail::antisymmetric(Expression{Term::log_poly_shift(1.0, {1.0, 1.0})});
    in.witnesses = {detail::ray(C::kBVED)};
    in.claims = {{C::kBVPD, V::kCertified, ClassParams::bvpd(0.0, 1 + l, 2 + l, 1 + l, 2 + l)},
                 {C::kBVED, V::kViolated, {}}};
  } else if (name == "bvpd_osc" || name == "bvpd_osc_l0") {
    in.description = "g = (t+1)^{3 - sin ln(t+1)}, Phi = diag(g(s)/g(t) e^{-I}, g(t)/g(s) e^{I})";
    c = detail::antisymmetric(Expression{Term::sin_log(1.0, 3.0, 1.0)});
    in.witnesses = {detail::witness("exp-log-peaks", C::kUPD, WitnessKind::kExpLogPeaks, 1, 16)};
    in.claims = {{C::kBVPD, V::kCertified, ClassParams::bvpd(std::log(4.0), 1 + l, 3 + l, 2 + l, 8 + l)},
                 {C::kUPD, V::kViolated, {}}};
  } else if (name == "pd_swapped" || name == "pd_swapped_l0") {
    in.description = "g = t + 1, Phi = diag(g(s)/g(t) e^{I}, g(t)/g(s) e^{-I})";
    c = detail::antisymmetric(Expression{Term::log_poly_shift(1.0, {1.0, 1.0})}, 1.0, -1.0);
    const double step = gen.limit() > 0.0 ? 5.0 : 5000.0;
    in.witnesses = {detail::ray(C::kED, 1.0, step), detail::ray(C::kPD, 1.0, step)};
    in.claims = {{C::kBVPD, V::kCertified, {}}, {C::kPD, V::kCertified, {}}, {C::kED, V::kViolated, {}}};
  } else if (name == "synth_ed") {
    in.description = "h = (-2t, 2t), c = 0";
    c.h = {Expression{Term::poly({0.0, -2.0})}, Expression{Term::poly({0.0, 2.0})}};
  } else if (name == "pure_growth") {
    in.description = "h = (2t, 2t), c = 0";
    c.h = {Expression{Term::poly({0.0, 2.0})}, Expression{Term::poly({0.0, 2.0})}};
  } else {
    throw ValidationError("unknown gallery instance: " + name);
  }
  return in;
}

}  // namespace skewdich
