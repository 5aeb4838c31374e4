#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "skewdich/log_scalar.hpp"

using namespace skewdich;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("round trip through log form") {
  for (double v : {-3.5, -1e-200, 1e-300, 2.0, 7e250}) {
    const LogScalar s = LogScalar::from_double(v);
    CHECK_THAT(s.to_double(), WithinRel(v, 1e-12));  // exp/log round trip loses ~ abs(log v) ulps
  }
  CHECK(LogScalar::from_double(0.0).is_zero());
  CHECK(LogScalar::from_log(kNegInf).is_zero());
}

TEST_CASE("sums and differences match plain arithmetic") {
  const double xs[] = {1.5, -2.25, 3e-5, -7.0, 0.0};
  for (double a : xs)
    for (double b : xs) {
      const LogScalar la = LogScalar::from_double(a), lb = LogScalar::from_double(b);
      CHECK_THAT((la + lb).to_double(), WithinAbs(a + b, 1e-13 * (std::fabs(a) + std::fabs(b) + 1)));
      CHECK_THAT((la - lb).to_double(), WithinAbs(a - b, 1e-13 * (std::fabs(a) + std::fabs(b) + 1)));
      CHECK_THAT((la * lb).to_double(), WithinAbs(a * b, 1e-13 * (std::fabs(a * b) + 1e-300)));
    }
  CHECK((LogScalar::from_double(2.0) - LogScalar::from_double(2.0)).is_zero());
}

TEST_CASE("magnitudes far beyond double range stay finite") {
  const LogScalar big = LogScalar::from_log(5120.0);
  const LogScalar sum = big + big;
  CHECK_THAT(sum.log_abs, WithinAbs(5120.0 + std::log(2.0), 1e-12));
  CHECK_THAT((big * big).log_abs, WithinAbs(10240.0, 0.0));
  CHECK_THAT(big.scaled(-5000.0).to_double(), WithinRel(std::exp(120.0), 1e-13));
}

TEST_CASE("log_sum_abs against direct evaluation") {
  std::vector<LogScalar> v{LogScalar::from_double(1.0), LogScalar::from_double(-2.0), LogScalar::from_double(0.5)};
  CHECK_THAT(log_sum_abs(v), WithinAbs(std::log(3.5), 1e-15));
  std::vector<LogScalar> huge{LogScalar::from_log(800.0), LogScalar::from_log(800.0)};
  CHECK_THAT(log_sum_abs(huge), WithinAbs(800.0 + std::log(2.0), 1e-12));
  CHECK(log_sum_abs(std::vector<LogScalar>{}) == kNegInf);
}

TEST_CASE("compensated accumulation of many small terms") {
  LogSumAccumulator acc;
  acc.add(0.0);
  for (int i = 0; i < 100000; ++i) acc.add(std::log(1e-10));
  CHECK_THAT(acc.log_value(), WithinAbs(std::log1p(1e-5), 1e-15));
  LogSumAccumulator empty;
  CHECK(empty.log_value() == kNegInf);
}
