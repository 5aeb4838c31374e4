#pragma once

// Instance-spec parsing and report serialization. Reports are written with a
// fixed field order and every float as %.12e so identical inputs give
// byte-identical output.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "skewdich/criteria.hpp"
#include "skewdich/dichotomy.hpp"
#include "skewdich/gallery.hpp"
#include "skewdich/growth.hpp"
#include "skewdich/spectral.hpp"

namespace skewdich {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// writer

namespace detail {

inline std::string format_double(double d) {
  if (std::isnan(d)) return "\"nan\"";
  if (std::isinf(d)) return d > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", d);
  return buf;
}

inline void write_json(std::ostream& os, const Json& j, int indent) {
  const std::string pad(indent * 2, ' ');
  const std::string inner((indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << Json(it.key()).dump() << ": ";
        write_json(os, it.value(), indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json(os, j[i], indent + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << inner;
        write_json(os, j[i], indent + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case Json::value_t::number_float: os << format_double(j.get<double>()); return;
    default: os << j.dump(); return;
  }
}

}  // namespace detail

inline std::string dump_report(const Json& j) {
  std::ostringstream os;
  detail::write_json(os, j, 0);
  os << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// to_json

inline Json to_json(const GeneratorSpec& g) {
  Json j;
  j["kind"] = g.kind();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, OnePlusExpNeg>) {
          j["limit"] = v.limit;
          j["amplitude"] = v.amplitude;
          j["rate"] = v.rate;
        } else if constexpr (std::is_same_v<T, ReciprocalShift>) {
          j["scale"] = v.scale;
          j["shift"] = v.shift;
        } else if constexpr (std::is_same_v<T, ConstantGenerator>) {
          j["value"] = v.value;
        } else {
          j["limit"] = v.limit;
        }
      },
      g.variant());
  return j;
}

inline Json to_json(const Term& t) {
  Json j;
  j["kind"] = to_string(t.kind);
  switch (t.kind) {
    case TermKind::kPoly: j["coeffs"] = t.coeffs; break;
    case TermKind::kTSinT:
    case TermKind::kTCosT: j["coef"] = t.coef; break;
    case TermKind::kLogGKnots:
      j["coef"] = t.coef;
      j["n_max"] = t.n_max;
      break;
    case TermKind::kLogPolyShift:
      j["coef"] = t.coef;
      j["coeffs"] = t.coeffs;
      break;
    case TermKind::kSinLog:
      j["coef"] = t.coef;
      j["base"] = t.base;
      j["amp"] = t.amp;
      break;
  }
  return j;
}

inline Json to_json(const Expression& e) {
  Json j = Json::array();
  for (const Term& t : e.terms()) j.push_back(to_json(t));
  return j;
}

inline Json to_json(const RangeSpec& r) {
  return Json{{"min", r.min}, {"max", r.max}, {"count", r.count}, {"spacing", to_string(r.spacing)}};
}

inline Json to_json(const GridSpec& g) {
  Json j;
  j["t_range"] = to_json(g.t_range);
  j["s_range"] = to_json(g.s_range);
  j["t0_values"] = g.t0_values;
  j["t0_at_s"] = g.t0_at_s;
  Json vs = Json::array();
  for (const StateVector& v : g.vectors) vs.push_back(Json::array({v.v1, v.v2}));
  j["vectors"] = vs;
  j["extra_times"] = g.extra_times;
  j["s_floor"] = g.s_floor;
  j["tol_log"] = g.tol_log;
  return j;
}

inline Json to_json(const ClassParams& p) {
  Json j;
  j["class"] = to_string(p.cls);
  Json br = Json::array();
  for (const BranchParams& b : p.branch) {
    Json e;
    switch (p.cls) {
      case DichotomyClass::kUED:
        e["log_N"] = b.log_n;
        e["nu"] = b.rate;
        break;
      case DichotomyClass::kBVED:
      case DichotomyClass::kBVPD:
        e["log_N"] = b.log_n;
        e["alpha"] = b.rate;
        e["beta"] = b.rate_s;
        break;
      case DichotomyClass::kED:
        e["log_K"] = b.log_n;
        e["eta"] = b.rate_s;
        e["nu"] = b.rate;
        break;
      case DichotomyClass::kUPD:
        e["log_N"] = b.log_n;
        e["alpha"] = b.rate;
        break;
      case DichotomyClass::kPD:
        e["log_K"] = b.log_n;
        e["eta"] = b.rate_s;
        e["alpha"] = b.rate;
        break;
    }
    br.push_back(e);
  }
  j["branches"] = br;
  if (p.cls == DichotomyClass::kPD) j["gauge"] = to_string(p.gauge);
  if (!p.extra_log_gauge.empty()) j["extra_log_gauge"] = to_json(p.extra_log_gauge);
  return j;
}

inline Json to_json(const Certificate& c, bool with_grid = false) {
  Json j;
  j["class"] = to_string(c.cls);
  j["verdict"] = to_string(c.verdict);
  j["source"] = c.source;
  j["worst_margin_log"] = c.worst_margin_log;
  j["params"] = to_json(c.params);
  if (c.argmax) {
    j["argmax"] = Json{{"t", c.argmax->p.t},     {"s", c.argmax->p.s},        {"t0", c.argmax->p.t0},
                       {"branch", c.argmax->branch}, {"vector", c.argmax->vector_index}};
  }
  if (with_grid) j["grid"] = to_json(c.grid);
  return j;
}

inline Json to_json(const WitnessResult& w) {
  Json j;
  j["name"] = w.spec.name;
  j["class"] = to_string(w.spec.cls);
  j["sequence"] = w.spec.formula();
  if (w.spec.kind == WitnessKind::kRay) {
    j["s0"] = w.spec.s0;
    j["step"] = w.spec.step;
  }
  j["n_min"] = w.spec.n_min;
  j["n_max"] = w.spec.n_max;
  j["vector"] = Json::array({w.spec.v.v1, w.spec.v.v2});
  j["candidates"] = static_cast<int>(w.family.size());
  j["n"] = w.ns;
  j["margins_log"] = w.margins_log;
  Json inc = Json::array();
  for (std::size_t i = 1; i < w.margins_log.size(); ++i) inc.push_back(w.margins_log[i] - w.margins_log[i - 1]);
  j["increments"] = inc;
  j["min_increment"] = w.min_increment;
  if (w.spec.closed_form_increment) j["closed_form_increment"] = *w.spec.closed_form_increment;
  j["verdict"] = to_string(w.verdict);
  return j;
}

inline Json to_json(const GrowthBounds& b) {
  return Json{{"kind", to_string(b.kind)},         {"log_K", b.log_k},       {"eta", b.eta},
              {"omega", b.omega},                  {"uniform", b.uniform},   {"bounded", b.bounded},
              {"worst_margin_log", b.worst_margin_log}};
}

inline Json to_json(const Gauge& g) {
  Json j{{"log_K", g.log_k}, {"eta", g.eta}};
  if (!g.extra.empty()) j["extra_log"] = to_json(g.extra);
  return j;
}

inline Json to_json(const CriterionOutcome& o) {
  return Json{{"evaluated", o.evaluated},           {"certified", o.certified},
              {"worst_slack_log", o.worst_slack_log}, {"max_rel_quad_error", o.max_rel_error},
              {"max_tail_rel", o.max_tail_rel},       {"at_t", o.at_time},
              {"at_t0", o.at_time0}};
}

inline Json to_json(const CriteriaReport& r) {
  Json j;
  j["applicable"] = r.applicable;
  if (!r.reason.empty()) j["reason"] = r.reason;
  j["hypotheses"] = Json{{"ed_certified", r.ed_certified},
                         {"c1_bounded_growth", r.c1_bounded_growth},
                         {"c2_decay", r.c2_decay}};
  j["gamma"] = r.params.gamma;
  j["rho"] = r.params.rho;
  j["D"] = to_json(r.params.d);
  j["Dtilde"] = to_json(r.params.d_tilde);
  j["criterion_i"] = to_json(r.crit_i);
  j["criterion_ii"] = to_json(r.crit_ii);
  j["worst_slack_log"] = r.worst_slack_log();
  j["tail_bound"] = r.tail_bound();
  j["sufficiency_ed_feasible"] = r.sufficiency_ed_feasible;
  j["notes"] = r.notes;
  return j;
}

inline Json to_json(const ModeVector& v) { return Json(v.a); }

// ---------------------------------------------------------------------------
// instance specs

namespace detail {

inline double number(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  require_valid(j.at(key).is_number(), std::string("instance spec: '") + key + "' must be a number");
  return j.at(key).get<double>();
}

inline std::vector<double> numbers(const Json& j, const char* key) {
  require_valid(j.contains(key) && j.at(key).is_array(), std::string("instance spec: '") + key + "' must be an array");
  std::vector<double> out;
  for (const Json& e : j.at(key)) {
    require_valid(e.is_number(), std::string("instance spec: '") + key + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline Term parse_term(const Json& j) {
  require_valid(j.is_object() && j.contains("kind") && j.at("kind").is_string(), "instance spec: term needs a kind");
  const TermKind kind = [&] {
    try {
      return term_kind_from_string(j.at("kind").get<std::string>());
    } catch (const std::exception& e) {
      throw ValidationError(std::string("instance spec: ") + e.what());
    }
  }();
  const double coef = number(j, "coef", 1.0);
  switch (kind) {
    case TermKind::kPoly: return Term::poly(numbers(j, "coeffs"));
    case TermKind::kTSinT: return Term::t_sin_t(coef);
    case TermKind::kTCosT: return Term::t_cos_t(coef);
    case TermKind::kLogGKnots: {
      const double n = number(j, "n_max", 6);
      require_valid(n >= 1 && n <= 12 && n == std::floor(n), "instance spec: n_max must be an integer in [1, 12]");
      return Term::log_g_knots(coef, static_cast<int>(n));
    }
    case TermKind::kLogPolyShift: return Term::log_poly_shift(coef, numbers(j, "coeffs"));
    case TermKind::kSinLog: return Term::sin_log(coef, number(j, "base", 3.0), number(j, "amp", 1.0));
  }
  throw ValidationError("instance spec: bad term");
}

inline Expression parse_expression(const Json& j) {
  if (j.is_null()) return {};
  if (j.is_object()) return Expression{parse_term(j)};
  require_valid(j.is_array(), "instance spec: h must be a term or an array of terms");
  std::vector<Term> terms;
  for (const Json& t : j) terms.push_back(parse_term(t));
  return Expression(std::move(terms));
}

inline Matrix2 parse_matrix(const Json& j) {
  require_valid(j.is_array() && j.size() == 2, "instance spec: projector must be a 2x2 matrix");
  Matrix2 m{};
  for (int r = 0; r < 2; ++r) {
    require_valid(j[r].is_array() && j[r].size() == 2, "instance spec: projector must be a 2x2 matrix");
    for (int c = 0; c < 2; ++c) {
      require_valid(j[r][c].is_number(), "instance spec: projector entries must be numbers");
      m[r][c] = j[r][c].get<double>();
    }
  }
  return m;
}

}  // namespace detail

inline GeneratorSpec parse_generator(const Json& j) {
  detail::require_valid(j.is_object() && j.contains("kind"), "instance spec: generator needs a kind");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "one_plus_exp_neg")
    return GeneratorSpec::one_plus_exp_neg(detail::number(j, "limit", 1.0), detail::number(j, "amplitude", 1.0),
                                           detail::number(j, "rate", 1.0));
  if (kind == "reciprocal_shift")
    return GeneratorSpec::reciprocal_shift(detail::number(j, "scale", 1.0), detail::number(j, "shift", 1.0));
  if (kind == "constant") return GeneratorSpec::constant(detail::number(j, "value", 1.0));
  throw ValidationError("instance spec: unknown generator kind '" + kind + "'");
}

/// {"name", "generator": {...}, "h1", "h2", "c1", "c2", "lambda",
///  "projectors": "coordinate" | {"p1": [[..],[..]]}}
inline Instance parse_instance(const Json& j) {
  detail::require_valid(j.is_object(), "instance spec: expected an object");
  Instance in;
  in.name = j.value("name", std::string("custom"));
  in.description = j.value("description", std::string());
  if (j.contains("generator")) in.x0.generator = parse_generator(j.at("generator"));
  in.x0.offset = detail::number(j, "offset", 0.0);
  detail::require_valid(in.x0.offset >= 0.0, "instance spec: offset must be >= 0");
  DiagonalCocycle& c = in.evolution.cocycle;
  c.h[0] = detail::parse_expression(j.value("h1", Json()));
  c.h[1] = detail::parse_expression(j.value("h2", Json()));
  c.c = {detail::number(j, "c1", 0.0), detail::number(j, "c2", 0.0)};
  c.shift_lambda = detail::number(j, "lambda", 0.0);
  if (j.contains("projectors")) {
    const Json& p = j.at("projectors");
    if (p.is_string()) {
      detail::require_valid(p.get<std::string>() == "coordinate", "instance spec: unknown projector family");
    } else {
      detail::require_valid(p.is_object() && p.contains("p1"), "instance spec: projectors need p1");
      in.pair = pair_from(ProjectorFamily::constant(detail::parse_matrix(p.at("p1"))));
    }
  }
  return in;
}

inline Instance parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("instance spec: ") + e.what());
  }
  try {
    return parse_instance(j);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("instance spec: ") + e.what());
  }
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  detail::require_valid(static_cast<bool>(in), "cannot open instance spec " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

/// "min:max:count"
inline RangeSpec parse_range(const std::string& text, Spacing spacing = Spacing::kLogMix) {
  RangeSpec r;
  r.spacing = spacing;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  std::string rest;
  if (!(is >> r.min >> c1 >> r.max >> c2 >> r.count) || c1 != ':' || c2 != ':' || (is >> rest))
    throw ValidationError("grid range must be min:max:count, got '" + text + "'");
  r.values();  // validates
  return r;
}

}  // namespace skewdich
