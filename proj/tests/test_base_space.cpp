#include <catch_amalgamated.hpp>

#include <cmath>

#include "skewdich/base_space.hpp"

using namespace skewdich;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("metric between f and the limit point is 0.5") {
  const GeneratorSpec g = GeneratorSpec::one_plus_exp_neg();
  const BasePoint f{g, 0.0};
  const BasePoint lim{g, kInfOffset};
  // sup|e^{-u}| = 1 on every [0, n], so each term is 2^{-n}/2
  CHECK_THAT(metric(f, lim, 40, 64), WithinAbs(0.5 * (1.0 - std::ldexp(1.0, -40)), 1e-9));
  CHECK_THAT(metric(f, lim, 40, 64), WithinAbs(0.5, 1e-9));
  CHECK(metric(f, f) == 0.0);
  CHECK_THAT(metric(f, lim), WithinAbs(metric(lim, f), 0.0));
}

TEST_CASE("metric shrinks along the semiflow toward the limit") {
  const GeneratorSpec g = GeneratorSpec::one_plus_exp_neg();
  const BasePoint lim{g, kInfOffset};
  double prev = 1.0;
  for (double t : {0.0, 1.0, 5.0, 20.0}) {
    const double d = metric(semiflow(t, 0.0, BasePoint{g, 0.0}), lim);
    CHECK(d < prev);
    CHECK_THAT(d, WithinAbs((1.0 - std::ldexp(1.0, -40)) * std::exp(-t) / (1.0 + std::exp(-t)), 1e-14));
    prev = d;
  }
}

TEST_CASE("semiflow is a translation and satisfies the flow law") {
  const BasePoint x{GeneratorSpec::one_plus_exp_neg(), 0.25};
  const BasePoint y = semiflow(7.0, 3.0, semiflow(3.0, 1.0, x));
  CHECK(y == semiflow(7.0, 1.0, x));
  CHECK_THAT(evaluate_point(y, 0.5), WithinAbs(1.0 + std::exp(-(0.25 + 6.0 + 0.5)), 1e-15));
  CHECK(semiflow(2.0, 1.0, BasePoint{x.generator, kInfOffset}).is_limit());
  CHECK_THROWS_AS(semiflow(1.0, 2.0, x), DomainError);
}

TEST_CASE("base integral closed forms") {
  const BasePoint x{GeneratorSpec::one_plus_exp_neg(), 0.0};
  CHECK_THAT(integrate_base(x, 3.0), WithinAbs(3.0 + 1.0 - std::exp(-3.0), 1e-14));
  const BasePoint r{GeneratorSpec::reciprocal_shift(), 2.0};
  CHECK_THAT(integrate_base(r, 4.0), WithinAbs(std::log(7.0 / 3.0), 1e-14));
  const BasePoint lim{GeneratorSpec::one_plus_exp_neg(), kInfOffset};
  CHECK(integrate_base(lim, 5.0) == 5.0);
  // additivity along the semiflow
  CHECK_THAT(integrate_base(x, 2.0) + integrate_base(semiflow(2.0, 0.0, x), 3.0),
             WithinAbs(integrate_base(x, 5.0), 1e-14));
  CHECK_THROWS_AS(integrate_base(x, -1.0), DomainError);
}

TEST_CASE("generator validation") {
  CHECK_THROWS_AS(GeneratorSpec::reciprocal_shift(1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(GeneratorSpec::constant(0.0), ValidationError);
  CHECK(GeneratorSpec::reciprocal_shift().limit() == 0.0);
}
