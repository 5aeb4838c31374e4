#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "skewdich/quadrature.hpp"

using namespace skewdich;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("adaptive Simpson on smooth integrands") {
  const auto r = quadrature::adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12);
  CHECK_THAT(r.value, WithinAbs(2.0, 1e-11));
  CHECK(r.error < 1e-10);
  const auto e = quadrature::adaptive_simpson([](double x) { return std::exp(-x); }, 0.0, 10.0, 1e-13);
  CHECK_THAT(e.value, WithinRel(1.0 - std::exp(-10.0), 1e-12));
}

TEST_CASE("log-space integral of exponentials with huge magnitude") {
  // \int_0^20 e^{500 + 30 u} du
  const auto r = quadrature::integrate_log([](double u) { return 500.0 + 30.0 * u; }, 0.0, 20.0);
  const double exact = 500.0 + std::log(std::expm1(600.0) / 30.0);
  CHECK_THAT(r.log_value, WithinAbs(exact, 1e-10));
  CHECK(r.rel_error < 1e-10);
}

TEST_CASE("log-space integral respects breakpoints of a kinked integrand") {
  auto lf = [](double u) { return -std::fabs(u - 1.3) * 40.0; };
  const auto r = quadrature::integrate_log(lf, 0.0, 3.0, {1.3});
  const double exact = std::log((1.0 - std::exp(-52.0)) / 40.0 + (1.0 - std::exp(-68.0)) / 40.0);
  CHECK_THAT(r.log_value, WithinAbs(exact, 1e-10));
}

TEST_CASE("degenerate intervals") {
  CHECK(quadrature::integrate_log([](double) { return 0.0; }, 1.0, 1.0).log_value == kNegInf);
  CHECK(quadrature::adaptive_simpson([](double) { return 1.0; }, 2.0, 2.0, 1e-9).value == 0.0);
}
