#include <catch_amalgamated.hpp>

#include "skewdich/criteria.hpp"
#include "skewdich/gallery.hpp"
#include "skewdich/json_io.hpp"

using namespace skewdich;

TEST_CASE("floats are written with 12 digits in exponent form") {
  CHECK(detail::format_double(1.0) == "1.000000000000e+00");
  CHECK(detail::format_double(-0.5) == "-5.000000000000e-01");
  CHECK(detail::format_double(std::numeric_limits<double>::infinity()) == "\"inf\"");
  CHECK(detail::format_double(std::nan("")) == "\"nan\"");
}

TEST_CASE("writer keeps insertion order and is stable") {
  Json j;
  j["zeta"] = 1.5;
  j["alpha"] = Json::array({1.0, 2.0});
  j["name"] = "x";
  j["n"] = 3;
  const std::string out = dump_report(j);
  CHECK(out ==
        "{\n  \"zeta\": 1.500000000000e+00,\n  \"alpha\": [1.000000000000e+00, 2.000000000000e+00],\n"
        "  \"name\": \"x\",\n  \"n\": 3\n}\n");
  CHECK(dump_report(j) == out);
}

TEST_CASE("grid and certificate serialise with all fields") {
  const Instance in = make_instance("synth_ed");
  const Certificate c = fit_class(in.evolution, in.pair, DichotomyClass::kUED, in.grid, in.x0);
  const Json j = to_json(c, true);
  CHECK(j.at("class") == "UED");
  CHECK(j.at("verdict") == "certified");
  CHECK(j.contains("grid"));
  CHECK(j.at("grid").contains("tol_log"));
  CHECK(dump_report(j) == dump_report(to_json(c, true)));
}

TEST_CASE("instance spec parsing") {
  const Instance in = parse_instance(std::string(R"({
    "name": "my",
    "generator": {"kind": "one_plus_exp_neg", "limit": 1},
    "h1": {"kind": "poly", "coeffs": [0, -2]},
    "h2": [{"kind": "poly", "coeffs": [0, 3]}, {"kind": "t_cos_t", "coef": -2}],
    "c1": -1, "c2": 1,
    "projectors": "coordinate"})"));
  CHECK(in.name == "my");
  const Instance ref = make_instance("bved");
  CHECK(in.evolution.cocycle.h[1](2.0) == ref.evolution.cocycle.h[1](2.0));
  CHECK(in.evolution.cocycle.c[0] == -1.0);
}

TEST_CASE("malformed specs are validation errors") {
  CHECK_THROWS_AS(parse_instance(std::string("{not json")), ValidationError);
  CHECK_THROWS_AS(parse_instance(std::string(R"({"h1": {"kind": "bogus"}})")), ValidationError);
  CHECK_THROWS_AS(parse_instance(std::string(R"({"generator": {"kind": "constant", "value": -1}})")),
                  ValidationError);
  CHECK_THROWS_AS(parse_instance(std::string(R"({"projectors": {"p1": [[1, 0.5], [0.5, 1]]}})")), ValidationError);
  CHECK_THROWS_AS(load_instance("/nonexistent/spec.json"), ValidationError);
}

TEST_CASE("grid range strings") {
  const RangeSpec r = parse_range("0:60:40");
  CHECK(r.min == 0.0);
  CHECK(r.max == 60.0);
  CHECK(r.count == 40);
  CHECK_THROWS_AS(parse_range("0:60"), ValidationError);
  CHECK_THROWS_AS(parse_range("5:1:10"), ValidationError);
  CHECK_THROWS_AS(parse_range("0:1:10x"), ValidationError);
}
