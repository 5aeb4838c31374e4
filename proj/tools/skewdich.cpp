// skewdich: classify skew-evolution instances, check integral criteria,
// evaluate witness sequences, and emit spectral samples.
//
// exit codes: 0 done, 1 internal error, 2 bad input, 3 incompatible
// projectors, 4 criteria hypotheses not met

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "skewdich/json_io.hpp"
#include "skewdich/skewdich.hpp"

using namespace skewdich;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kInternal = 1, kBadInput = 2, kIncompatible = 3, kNotApplicable = 4 };

struct Common {
  std::string gallery;
  std::string spec;
  std::string generator;
  double alpha1 = -1.0;
  double alpha2 = 1.0;
  std::string grid_t;
  std::string grid_s;
  double tol_log = 1e-9;
  std::string out;
  bool json = false;
};

void add_instance_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--gallery", c.gallery, "gallery instance name");
  cmd->add_option("--spec", c.spec, "instance spec JSON file");
  cmd->add_option("--generator", c.generator,
                  "generator override: one_plus_exp_neg[:l] | reciprocal_shift | constant:v");
  cmd->add_option("--alpha1", c.alpha1, "ex21 exponent 1");
  cmd->add_option("--alpha2", c.alpha2, "ex21 exponent 2");
}

void add_output_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "write the JSON report to FILE");
  cmd->add_flag("--json", c.json, "print the JSON report to stdout");
}

void add_grid_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--grid-t", c.grid_t, "t axis min:max:count");
  cmd->add_option("--grid-s", c.grid_s, "s axis min:max:count");
  cmd->add_option("--tol-log", c.tol_log, "log tolerance for certification");
}

GeneratorSpec parse_generator_flag(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const bool has_arg = colon != std::string::npos;
  double arg = 0.0;
  if (has_arg) {
    std::istringstream is(text.substr(colon + 1));
    if (!(is >> arg)) throw ValidationError("bad generator argument in '" + text + "'");
  }
  if (kind == "one_plus_exp_neg") return GeneratorSpec::one_plus_exp_neg(has_arg ? arg : 1.0);
  if (kind == "reciprocal_shift") return GeneratorSpec::reciprocal_shift(1.0, has_arg ? arg : 1.0);
  if (kind == "constant") return GeneratorSpec::constant(has_arg ? arg : 1.0);
  throw ValidationError("unknown generator '" + kind + "'");
}

Instance load(const Common& c) {
  if (c.gallery.empty() == c.spec.empty()) throw ValidationError("give exactly one of --gallery or --spec");
  Instance in;
  if (!c.gallery.empty()) {
    InstanceOptions opt;
    opt.alpha1 = c.alpha1;
    opt.alpha2 = c.alpha2;
    if (!c.generator.empty()) opt.generator = parse_generator_flag(c.generator);
    in = make_instance(c.gallery, opt);
  } else {
    in = load_instance(c.spec);
    if (!c.generator.empty()) in.x0.generator = parse_generator_flag(c.generator);
  }
  return in;
}

GridSpec grid_for(const Instance& in, const Common& c) {
  GridSpec g = in.grid;
  if (!c.grid_t.empty()) g.t_range = parse_range(c.grid_t, g.t_range.spacing);
  if (!c.grid_s.empty()) g.s_range = parse_range(c.grid_s, g.s_range.spacing);
  detail::require_valid(c.tol_log > 0.0, "--tol-log must be positive");
  g.tol_log = c.tol_log;
  return g;
}

Json instance_json(const Instance& in) {
  Json j;
  j["name"] = in.name;
  j["description"] = in.description;
  j["generator"] = to_json(in.x0.generator);
  j["base_offset"] = in.x0.offset;
  const DiagonalCocycle& c = in.evolution.cocycle;
  j["h1"] = to_json(c.h[0]);
  j["h2"] = to_json(c.h[1]);
  j["c1"] = c.c[0];
  j["c2"] = c.c[1];
  j["lambda"] = c.shift_lambda;
  const Matrix2 p1 = in.pair.p1(in.x0);
  j["projector_p1"] = Json::array({Json::array({p1[0][0], p1[0][1]}), Json::array({p1[1][0], p1[1][1]})});
  return j;
}

Json header(const std::string& command, const Instance& in) {
  Json j;
  j["tool"] = "skewdich";
  j["version"] = kVersion;
  j["command"] = command;
  j["instance"] = instance_json(in);
  return j;
}

void emit(const Json& report, const Common& c, const std::string& summary) {
  const std::string text = dump_report(report);
  if (!c.out.empty()) {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + c.out);
    f << text;
  }
  if (c.json)
    std::cout << text;
  else
    std::cout << summary;
}

void require_compatible(const Instance& in) {
  const CompatibilityReport rep = check_compatibility(in.evolution, in.pair, in.x0);
  if (!rep.compatible) {
    std::ostringstream os;
    os << "projector pair incompatible: residual " << rep.worst_residual << " at t=" << rep.t << " s=" << rep.s
       << " (P" << rep.k << "), structure error " << rep.structure_error;
    throw IncompatibleProjectors(os.str());
  }
}

// ---------------------------------------------------------------------------

int cmd_classify(const Common& c) {
  const Instance in = load(c);
  require_compatible(in);
  const GridSpec grid = grid_for(in, c);
  const Classification cls = classify(in.evolution, in.pair, grid, in.witnesses, in.x0);

  Json rep = header("classify", in);
  rep["grid"] = to_json(grid);
  rep["polynomial_s_floor"] = grid.restricted_to_polynomial().s_floor;
  Json certs = Json::array();
  for (const Certificate& cert : cls.certificates) certs.push_back(to_json(cert));
  rep["certificates"] = certs;
  Json ws = Json::array();
  for (const WitnessResult& w : cls.witnesses) ws.push_back(to_json(w));
  rep["witnesses"] = ws;

  Json claims = Json::array();
  for (const Claim& cl : in.claims) {
    Json e;
    e["class"] = to_string(cl.cls);
    e["claimed"] = to_string(cl.verdict);
    e["tool"] = to_string(cls[cl.cls].verdict);
    e["agrees"] = cl.verdict == cls[cl.cls].verdict;
    if (cl.params) {
      const GridSpec g = is_polynomial(cl.cls) ? grid.restricted_to_polynomial() : grid;
      e["claimed_params"] = to_json(*cl.params);
      e["claimed_params_margin_log"] = class_margin(tabulate(in.evolution, in.pair, g, in.x0), *cl.params).worst;
    }
    claims.push_back(e);
  }
  rep["claims"] = claims;

  const SkewEvolution c1{in.evolution.cocycle, in.pair.p1};
  const SkewEvolution c2{in.evolution.cocycle, in.pair.p2};
  rep["growth"] = Json{{"c1_growth", to_json(fit_growth(c1, GrowthKind::kGrowth, grid, in.x0))},
                       {"c2_decay", to_json(fit_growth(c2, GrowthKind::kDecay, grid, in.x0))}};
  rep["notes"] = cls.notes;

  std::ostringstream s;
  s << in.name << "\n";
  for (const Certificate& cert : cls.certificates)
    s << "  " << to_string(cert.cls) << ": " << to_string(cert.verdict) << " (" << cert.source
      << ", worst margin " << cert.worst_margin_log << ")\n";
  for (const WitnessResult& w : cls.witnesses)
    s << "  witness " << w.spec.name << " [" << to_string(w.spec.cls) << "]: " << to_string(w.verdict) << "\n";
  for (const Claim& cl : in.claims)
    if (cl.verdict != cls[cl.cls].verdict)
      s << "  claim differs: " << to_string(cl.cls) << " claimed " << to_string(cl.verdict) << "\n";
  emit(rep, c, s.str());
  return kOk;
}

struct CriteriaFlags {
  std::optional<double> gamma, rho, d, d_tilde;
  bool claimed_gauge = false;
  bool force = false;
};

int cmd_criteria(const Common& c, const CriteriaFlags& f) {
  const Instance in = load(c);
  require_compatible(in);
  const GridSpec grid = grid_for(in, c);
  Certificate ed = fit_class(in.evolution, in.pair, DichotomyClass::kED, grid, in.x0);
  std::string ed_source = "grid-fit";
  if (f.claimed_gauge) {
    const Claim* cl = in.claim(DichotomyClass::kED);
    if (!cl || !cl->params) throw ValidationError("instance has no claimed ED constants");
    const MarginResult mr = class_margin(tabulate(in.evolution, in.pair, grid, in.x0), *cl->params);
    ed.params = *cl->params;
    ed.worst_margin_log = mr.worst;
    ed.argmax = mr.argmax;
    ed.verdict = mr.worst <= grid.tol_log ? Verdict::kCertified : Verdict::kViolated;
    ed.source = ed_source = "claimed";
  }

  const CriteriaSamples samples;
  CriteriaReport cr;
  const Hypotheses h = check_hypotheses(ed, in.evolution, in.pair, grid, in.x0);
  fill_hypotheses(cr, h);
  cr.sufficiency_ed_feasible = h.ed_certified;
  const bool run = cr.applicable || f.force;
  if (run) {
    if (!h.ed_certified && !(f.gamma && f.rho && f.d && f.d_tilde))
      throw ValidationError("--force without a certified ED envelope needs --gamma, --rho, --D and --Dtilde");
    CriteriaParams p = necessity_params(ed.params, grid.t_range.max);
    if (f.gamma) p.gamma = *f.gamma;
    if (f.rho) p.rho = *f.rho;
    if (f.d) p.d = Gauge::constant(*f.d);
    if (f.d_tilde) p.d_tilde = Gauge::constant(*f.d_tilde);
    const StableEnvelope env = h.ed_certified ? stable_envelope(ed.params) : StableEnvelope{{}, 0.0};
    const CriteriaReport chk = check_criteria(in.evolution, in.pair, p, env, samples, in.x0);
    cr.params = chk.params;
    cr.crit_i = chk.crit_i;
    cr.crit_ii = chk.crit_ii;
    if (!f.gamma) cr.notes.push_back("gamma taken as +nu1/2 so the weighted integral converges");
    if (!cr.applicable) cr.notes.push_back("hypotheses not met; run forced");
  }

  Json rep = header("criteria", in);
  rep["grid"] = to_json(grid);
  rep["ed_certificate"] = to_json(ed);
  rep["ed_source"] = ed_source;
  Json sj;
  sj["s_values"] = samples.s_values;
  sj["t0_values"] = samples.t0_values;
  sj["spans"] = samples.spans;
  sj["rel_tol"] = kCriteriaRelTol;
  sj["tail_target"] = kTailTarget;
  rep["samples"] = sj;
  rep["criteria"] = to_json(cr);

  std::ostringstream s;
  s << in.name << ": ";
  if (!run) {
    s << cr.reason << "\n";
  } else {
    s << "criterion (i) " << (cr.crit_i.certified ? "certified" : "not certified") << " (slack "
      << cr.crit_i.worst_slack_log << ", tail " << cr.crit_i.max_tail_rel << "), criterion (ii) "
      << (cr.crit_ii.certified ? "certified" : "not certified") << " (slack " << cr.crit_ii.worst_slack_log << ")\n";
  }
  emit(rep, c, s.str());
  if (!cr.applicable && !f.force) {
    std::cerr << cr.reason << "\n";
    return kNotApplicable;
  }
  return kOk;
}

struct FalsifyFlags {
  std::string cls;
  std::string witness;
  std::optional<int> n_max;
};

int cmd_falsify(const Common& c, const FalsifyFlags& f) {
  const Instance in = load(c);
  require_compatible(in);
  const DichotomyClass cls = class_from_string(f.cls);
  const WitnessSpec* w = in.witness(f.witness, cls);
  if (!w) throw ValidationError("no witness '" + f.witness + "' registered for " + f.cls + " on " + in.name);
  WitnessSpec spec = *w;
  if (f.n_max) spec.n_max = *f.n_max;
  const WitnessResult res = falsify(in.evolution, in.pair, spec, in.x0);

  Json rep = header("falsify", in);
  rep["thresholds"] = Json{{"final_margin", kFalsifyFinalMargin}, {"min_increment", kFalsifyMinIncrement}};
  Json fam = Json::array();
  for (const ClassParams& p : res.family) fam.push_back(to_json(p));
  rep["family"] = fam;
  rep["candidate_margins_log"] = res.candidate_margins;
  rep["witness"] = to_json(res);

  std::ostringstream s;
  s << in.name << " " << f.cls << " witness " << f.witness << ": " << to_string(res.verdict) << "\n";
  for (std::size_t i = 0; i < res.ns.size(); ++i)
    s << "  n=" << res.ns[i] << "  margin " << res.margins_log[i] << "\n";
  emit(rep, c, s.str());
  return kOk;
}

int cmd_gallery_list(const Common& c) {
  Json rep;
  rep["tool"] = "skewdich";
  rep["version"] = kVersion;
  rep["command"] = "gallery-list";
  Json list = Json::array();
  std::ostringstream s;
  for (const std::string& name : gallery_names()) {
    const Instance in = make_instance(name);
    Json e;
    e["name"] = name;
    e["description"] = in.description;
    e["generator"] = to_json(in.x0.generator);
    Json claims = Json::object();
    for (const Claim& cl : in.claims) claims[to_string(cl.cls)] = to_string(cl.verdict);
    e["claims"] = claims;
    Json ws = Json::array();
    for (const WitnessSpec& w : in.witnesses) ws.push_back(w.name + ":" + to_string(w.cls));
    e["witnesses"] = ws;
    list.push_back(e);
    s << name << "  " << in.description << "\n";
  }
  rep["instances"] = list;
  emit(rep, c, s.str());
  return kOk;
}

struct ComposeFlags {
  int samples = 1000;
  std::uint64_t seed = 20240601;
  double t_max = 60.0;
};

int cmd_compose_check(const Common& c, const ComposeFlags& f) {
  detail::require_valid(f.samples >= 1, "--samples must be positive");
  detail::require_valid(f.t_max > 0.0, "--t-max must be positive");
  const bool spectral = c.gallery == "spectral";
  Instance in;
  if (spectral) {
    in.name = "spectral";
    in.description = "cosine-mode heat cocycle S(I(x, t - s))";
    if (!c.generator.empty()) in.x0.generator = parse_generator_flag(c.generator);
  } else {
    in = load(c);
  }
  std::mt19937_64 rng(f.seed);
  std::uniform_real_distribution<double> u(0.0, f.t_max);
  std::uniform_real_distribution<double> uv(-1.0, 1.0);
  double worst = 0.0;
  std::array<double, 3> at{};
  for (int i = 0; i < f.samples; ++i) {
    std::array<double, 3> p{u(rng), u(rng), u(rng)};
    std::sort(p.begin(), p.end());
    const StateVector v{uv(rng), uv(rng)};
    const double r = spectral ? spectral_compose_residual(p[2], p[1], p[0], in.x0)
                              : compose_residual(in.evolution, p[2], p[1], p[0], in.x0, v);
    if (r > worst) {
      worst = r;
      at = {p[2], p[1], p[0]};
    }
  }
  Json rep = header("compose-check", in);
  rep["samples"] = f.samples;
  rep["seed"] = f.seed;
  rep["t_max"] = f.t_max;
  rep["max_residual_log"] = worst;
  rep["at"] = Json{{"t", at[0]}, {"s", at[1]}, {"t0", at[2]}};
  rep["tol"] = 1e-9;
  rep["pass"] = worst <= 1e-9;
  std::ostringstream s;
  s << in.name << ": max compose residual " << worst << " over " << f.samples << " triples\n";
  emit(rep, c, s.str());
  return kOk;
}

struct SpectralFlags {
  std::vector<double> times{0.0, 0.01, 0.05, 0.1, 0.5};
  std::vector<double> coeffs{0.0, 1.0};
  int y_samples = 65;
  int modes = kDefaultModes;
};

int cmd_spectral_csv(const Common& c, const SpectralFlags& f) {
  detail::require_valid(f.modes >= 1 && static_cast<int>(f.coeffs.size()) <= f.modes,
                        "--coeffs has more entries than --modes");
  ModeVector v = ModeVector::zeros(f.modes);
  std::copy(f.coeffs.begin(), f.coeffs.end(), v.a.begin());
  BasePoint x;
  if (!c.generator.empty()) x.generator = parse_generator_flag(c.generator);
  std::ostringstream os;
  write_spectral_csv(os, v, x, f.times, f.y_samples);
  if (!c.out.empty()) {
    std::ofstream file(c.out, std::ios::binary);
    if (!file) throw ValidationError("cannot write " + c.out);
    file << os.str();
  } else {
    std::cout << os.str();
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skewdich: dichotomy classes of skew-evolution semiflows"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  CriteriaFlags crit;
  FalsifyFlags fals;
  ComposeFlags comp;
  SpectralFlags spec;

  auto* classify_cmd = app.add_subcommand("classify", "fit all six classes and apply registered witnesses");
  add_instance_flags(classify_cmd, common);
  add_grid_flags(classify_cmd, common);
  add_output_flags(classify_cmd, common);

  auto* criteria_cmd = app.add_subcommand("criteria", "check the integral criteria for exponential dichotomy");
  add_instance_flags(criteria_cmd, common);
  add_grid_flags(criteria_cmd, common);
  add_output_flags(criteria_cmd, common);
  criteria_cmd->add_option("--gamma", crit.gamma, "gamma for criterion (i)");
  criteria_cmd->add_option("--rho", crit.rho, "rho for criterion (ii)");
  criteria_cmd->add_option("--D", crit.d, "constant gauge D");
  criteria_cmd->add_option("--Dtilde", crit.d_tilde, "constant gauge D~");
  criteria_cmd->add_flag("--claimed-gauge", crit.claimed_gauge, "use the instance's claimed ED constants");
  criteria_cmd->add_flag("--force", crit.force, "run even when the hypotheses fail");

  auto* falsify_cmd = app.add_subcommand("falsify", "evaluate a registered witness sequence");
  add_instance_flags(falsify_cmd, common);
  add_output_flags(falsify_cmd, common);
  falsify_cmd->add_option("--class", fals.cls, "dichotomy class")->required();
  falsify_cmd->add_option("--witness", fals.witness, "witness name")->required();
  falsify_cmd->add_option("--n-max", fals.n_max, "last sequence index");

  auto* list_cmd = app.add_subcommand("gallery-list", "list gallery instances");
  add_output_flags(list_cmd, common);

  auto* compose_cmd = app.add_subcommand("compose-check", "cocycle law on random time triples");
  add_instance_flags(compose_cmd, common);
  add_output_flags(compose_cmd, common);
  compose_cmd->add_option("--samples", comp.samples, "number of triples");
  compose_cmd->add_option("--seed", comp.seed, "random seed");
  compose_cmd->add_option("--t-max", comp.t_max, "largest time");

  auto* spectral_cmd = app.add_subcommand("spectral-csv", "sample v(t, y) of the cosine-mode heat cocycle as CSV");
  spectral_cmd->add_option("--generator", common.generator, "generator of the base point");
  spectral_cmd->add_option("--times", spec.times, "sample times")->delimiter(',');
  spectral_cmd->add_option("--coeffs", spec.coeffs, "initial mode coefficients a0,a1,...")->delimiter(',');
  spectral_cmd->add_option("--y-samples", spec.y_samples, "points in y");
  spectral_cmd->add_option("--modes", spec.modes, "number of modes");
  spectral_cmd->add_option("--out", common.out, "write CSV to FILE");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*classify_cmd) return cmd_classify(common);
    if (*criteria_cmd) return cmd_criteria(common, crit);
    if (*falsify_cmd) return cmd_falsify(common, fals);
    if (*list_cmd) return cmd_gallery_list(common);
    if (*compose_cmd) return cmd_compose_check(common, comp);
    if (*spectral_cmd) return cmd_spectral_csv(common, spec);
  } catch (const IncompatibleProjectors& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIncompatible;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
