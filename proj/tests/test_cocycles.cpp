#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "skewdich/cocycle.hpp"
#include "skewdich/gallery.hpp"

using namespace skewdich;
using Catch::Matchers::WithinAbs;

TEST_CASE("diagonal log factors have the closed form") {
  DiagonalCocycle c;
  c.h = {Expression{Term::poly({0.0, -2.0})}, Expression{Term::t_sin_t(1.0)}};
  c.c = {-1.0, 1.0};
  const BasePoint x{GeneratorSpec::one_plus_exp_neg(), 0.0};
  const double t = 4.0, s = 1.5;
  const double I = (t - s) + std::exp(-0.0) - std::exp(-(t - s));
  CHECK_THAT(c.log_factor(0, t, s, x), WithinAbs(-2.0 * (t - s) - I, 1e-13));
  CHECK_THAT(c.log_factor(1, t, s, x), WithinAbs(t * std::sin(t) - s * std::sin(s) + I, 1e-13));
  CHECK(c.log_factor(0, s, s, x) == 0.0);
}

TEST_CASE("ex21 with exponents a1, a2 applies e^{a_k I}") {
  const Instance in = make_instance("ex21", {.generator = {}, .alpha1 = -0.5, .alpha2 = 2.0});
  const BasePoint x = in.x0;
  const LogVector w = apply(in.evolution, 3.0, 1.0, x, StateVector{1.0, -1.0});
  const double I = integrate_base(x, 2.0);
  CHECK_THAT(w[0].log_abs, WithinAbs(-0.5 * I, 1e-14));
  CHECK_THAT(w[1].log_abs, WithinAbs(2.0 * I, 1e-14));
  CHECK(w[1].sign == -1);
}

TEST_CASE("lambda shift multiplies by e^{lambda (t - s)}") {
  const Instance in = make_instance("bved");
  const SkewEvolution sh = shift(in.evolution, 0.75);
  for (int k = 0; k < 2; ++k)
    CHECK_THAT(sh.cocycle.log_factor(k, 9.0, 2.0, in.x0) - in.evolution.cocycle.log_factor(k, 9.0, 2.0, in.x0),
               WithinAbs(0.75 * 7.0, 1e-12));
}

TEST_CASE("cocycle law on every gallery instance") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 60.0);
  for (const std::string& name : gallery_names()) {
    const Instance in = make_instance(name);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      double a = u(rng), b = u(rng), c = u(rng);
      if (a > b) std::swap(a, b);
      if (b > c) std::swap(b, c);
      if (a > b) std::swap(a, b);
      worst = std::max(worst, compose_residual(in.evolution, c, b, a, in.x0, StateVector{1.0, 1.0}));
    }
    INFO(name);
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("identity at t = s and domain errors") {
  const Instance in = make_instance("upd");
  const LogVector v = StateVector{2.0, 3.0}.to_log();
  CHECK(apply(in.evolution, 4.0, 4.0, in.x0, v) == v);
  CHECK_THROWS_AS(apply(in.evolution, 1.0, 2.0, in.x0, v), DomainError);
  CHECK_THROWS_AS(compose_residual(in.evolution, 3.0, 1.0, 2.0, in.x0, {1.0, 0.0}), DomainError);
}

TEST_CASE("log discrepancy treats zero components exactly") {
  const LogVector a{LogScalar::from_double(1.0), LogScalar::zero()};
  const LogVector b{LogScalar::from_double(1.0), LogScalar::from_double(1e-300)};
  CHECK(log_discrepancy(a, a) == 0.0);
  CHECK(std::isinf(log_discrepancy(a, b)));
}
