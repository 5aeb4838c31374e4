#include <catch_amalgamated.hpp>

#include <cmath>

#include "skewdich/dichotomy.hpp"
#include "skewdich/gallery.hpp"

using namespace skewdich;
using C = DichotomyClass;
using Catch::Matchers::WithinAbs;

TEST_CASE("class coefficient forms") {
  CHECK(class_coeffs(C::kUED, GaugeForm::kExponential, 5.0, 2.0).a == 3.0);
  CHECK(class_coeffs(C::kBVED, GaugeForm::kExponential, 5.0, 2.0).b == 2.0);
  const Coeffs u = class_coeffs(C::kUPD, GaugeForm::kExponential, 8.0, 2.0);
  CHECK_THAT(u.a, WithinAbs(std::log(4.0), 1e-15));
  CHECK(class_coeffs(C::kPD, GaugeForm::kExponential, 8.0, 2.0).b == 2.0);
  CHECK_THAT(class_coeffs(C::kPD, GaugeForm::kPower, 8.0, 2.0).b, WithinAbs(std::log(2.0), 1e-15));
}

TEST_CASE("implication lattice") {
  const auto s = stronger_than(C::kPD);
  CHECK(s.size() == 5);
  CHECK(stronger_than(C::kUED).empty());
  const auto b = stronger_than(C::kBVPD);
  CHECK(std::find(b.begin(), b.end(), C::kED) == b.end());
  CHECK(class_from_string("BVPD") == C::kBVPD);
  CHECK_THROWS_AS(class_from_string("XYZ"), ValidationError);
}

TEST_CASE("ex21: sharp UED exponent is the limit of the generator") {
  const Instance in = make_instance("ex21");
  const ProjectorPair pair = coordinate_projectors();
  // I(x, t - s) >= l (t - s) with equality approached far along the flow
  CHECK(class_margin(in.evolution, pair, ClassParams::ued(0.0, 1.0, 0.0, 1.0), in.grid, in.x0) <= 1e-9);
  CHECK(class_margin(in.evolution, pair, ClassParams::ued(0.0, 1.1, 0.0, 1.1), in.grid, in.x0) > 1.0);
}

TEST_CASE("bved: claimed BVED constants against the grid") {
  const Instance in = make_instance("bved");
  const ProjectorPair pair = coordinate_projectors();
  // branch 2 log factor is at least 2t - 6s at cos peaks, so beta_2 = 5 + l is needed
  CHECK(class_margin(in.evolution, pair, *in.claim(C::kBVED)->params, in.grid, in.x0) > 100.0);
  CHECK(class_margin(in.evolution, pair, ClassParams::bved(0.0, 2.0, 4.0, 2.0, 6.0), in.grid, in.x0) <= 1e-9);
  CHECK(class_margin(in.evolution, pair, ClassParams::bved(0.0, 2.0, 4.0, 2.0, 5.9), in.grid, in.x0) > 0.1);
}

TEST_CASE("ed_gap: claimed ED with gauge g(u) e^{2u}") {
  const Instance in = make_instance("ed_gap");
  const double m = class_margin(in.evolution, coordinate_projectors(), *in.claim(C::kED)->params, in.grid, in.x0);
  CHECK(m <= 1e-9);
}

TEST_CASE("fit recovers the synthetic exponents") {
  const Instance in = make_instance("synth_ed");
  const Certificate c = fit_class(in.evolution, coordinate_projectors(), C::kUED, in.grid, in.x0);
  CHECK(c.verdict == Verdict::kCertified);
  CHECK(c.worst_margin_log <= 1e-9);
  for (const BranchParams& b : c.params.branch) {
    CHECK_THAT(b.rate, WithinAbs(2.0, 1e-3));
    CHECK(b.log_n <= std::log1p(1e-6));
  }
}

TEST_CASE("conversions keep certified margins") {
  const Instance in = make_instance("ex21");
  const ProjectorPair pair = coordinate_projectors();
  const ResidualTable exp_t = tabulate(in.evolution, pair, in.grid, in.x0);
  const ResidualTable poly_t = tabulate(in.evolution, pair, in.grid.restricted_to_polynomial(), in.x0);
  const Certificate ued = fit_class(exp_t, C::kUED);
  REQUIRE(ued.verdict == Verdict::kCertified);
  for (C to : {C::kBVED, C::kUPD}) {
    const auto p = convert(ued.params, to);
    REQUIRE(p);
    CHECK(class_margin(to == C::kUPD ? poly_t : exp_t, *p).worst <= 1e-9);
  }
  CHECK_FALSE(convert(ClassParams::bved(0.0, 1.0, 2.0, 1.0, 1.0), C::kBVPD));
  CHECK_FALSE(convert(ued.params, C::kPD));
}

TEST_CASE("parameter validation and polynomial domain") {
  const Instance in = make_instance("upd");
  const ProjectorPair pair = coordinate_projectors();
  CHECK_THROWS_AS(class_margin(in.evolution, pair, ClassParams::ued(0.0, -1.0, 0.0, 1.0), in.grid, in.x0),
                  ValidationError);
  CHECK_THROWS_AS(class_margin(in.evolution, pair, ClassParams::ued(-1.0, 1.0, 0.0, 1.0), in.grid, in.x0),
                  ValidationError);
  CHECK_THROWS_AS(class_margin(in.evolution, pair, ClassParams::upd(0.0, 1.0, 1.0), in.grid, in.x0), DomainError);
  CHECK_NOTHROW(class_margin(in.evolution, pair, ClassParams::upd(0.0, 1.0, 1.0), GridSpec::polynomial(), in.x0));
}
