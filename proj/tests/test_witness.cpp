#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "skewdich/dichotomy.hpp"
#include "skewdich/gallery.hpp"

using namespace skewdich;
using C = DichotomyClass;
using Catch::Matchers::WithinAbs;

TEST_CASE("witness sequences in closed form") {
  const Instance in = make_instance("bved");
  const WitnessSpec* w = in.witness("sin-peaks", C::kUED);
  REQUIRE(w);
  const auto [t, s] = w->at(3);
  CHECK_THAT(t, WithinAbs(6 * std::numbers::pi + std::numbers::pi / 2, 1e-14));
  CHECK_THAT(s, WithinAbs(6 * std::numbers::pi, 1e-14));
  WitnessSpec k;
  k.kind = WitnessKind::kKnotDrop;
  CHECK(k.at(2).first == 2.0625);
}

TEST_CASE("bved sin-peaks: UED margins grow by 2 pi for any fixed constants") {
  const Instance in = make_instance("bved");
  const ProjectorPair pair = coordinate_projectors();
  WitnessSpec w = *in.witness("sin-peaks", C::kUED);
  w.n_max = 8;
  for (double log_n : {0.0, 5.0, 10.0})
    for (double nu : {1e-3, 0.5, 4.0}) {
      const WitnessResult r = falsify(in.evolution, pair, w, {ClassParams::ued(log_n, nu, log_n, nu)}, in.x0);
      const auto& m = r.candidate_margins[0];
      for (std::size_t i = 1; i < m.size(); ++i) CHECK_THAT(m[i] - m[i - 1], WithinAbs(2 * std::numbers::pi, 1e-6));
    }
  const WitnessResult full = falsify(in.evolution, pair, *in.witness("sin-peaks", C::kUED), in.x0);
  CHECK(full.verdict == WitnessVerdict::kFalsified);
}

TEST_CASE("ed_gap knot-drop falsifies BVED quickly") {
  const Instance in = make_instance("ed_gap");
  const WitnessResult r = falsify(in.evolution, coordinate_projectors(), *in.witness("knot-drop", C::kBVED), in.x0);
  CHECK(r.verdict == WitnessVerdict::kFalsified);
  REQUIRE(r.margins_log.size() >= 3);
  CHECK(r.margins_log[2] > 150.0);
}

TEST_CASE("a bounded witness stays inconclusive") {
  const Instance in = make_instance("synth_ed");
  WitnessSpec w;
  w.name = "ray";
  w.cls = C::kUED;
  w.kind = WitnessKind::kRay;
  w.step = 5.0;
  w.n_max = 10;
  const WitnessResult r = falsify(in.evolution, coordinate_projectors(), w, in.x0);
  CHECK(r.verdict == WitnessVerdict::kInconclusive);
}

TEST_CASE("single-point witnesses never falsify") {
  const Instance in = make_instance("bved");
  WitnessSpec w = *in.witness("sin-peaks", C::kUED);
  w.n_min = w.n_max = 12;
  CHECK(falsify(in.evolution, coordinate_projectors(), w, in.x0).verdict == WitnessVerdict::kInconclusive);
}
