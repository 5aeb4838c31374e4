// Acceptance gate: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "skewdich/skewdich.hpp"

using namespace skewdich;
using C = DichotomyClass;

namespace {

int g_failures = 0;

void report(int n, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// t >= s >= t0 drawn uniformly from [0, t_max]
struct Triple {
  double t, s, t0;
};
Triple draw(std::mt19937_64& rng, double t_max) {
  std::uniform_real_distribution<double> u(0.0, t_max);
  double a = u(rng), b = u(rng), c = u(rng);
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  return {c, b, a};
}

void criterion1() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> uv(-1.0, 1.0);
  double worst = 0.0;
  std::string where;
  for (const std::string& name : core_gallery_names()) {
    const Instance in = make_instance(name);
    double w = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Triple p = draw(rng, 60.0);
      w = std::max(w, compose_residual(in.evolution, p.t, p.s, p.t0, in.x0, StateVector{uv(rng), uv(rng)}));
    }
    if (w >= worst) {
      worst = w;
      where = name;
    }
  }
  const BasePoint x{GeneratorSpec::one_plus_exp_neg(), 0.0};
  double ws = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Triple p = draw(rng, 60.0);
    ws = std::max(ws, spectral_compose_residual(p.t, p.s, p.t0, x));
  }
  if (ws >= worst) {
    worst = ws;
    where = "spectral";
  }
  report(1, worst <= 1e-9, fmt("max compose residual %.3e", worst) + " (at " + where + ")");
}

void criterion2() {
  const Instance in = make_instance("bved");
  const ClassParams p = ClassParams::bved(0.0, 2.0, 4.0, 2.0, 2.0);
  const ResidualTable table = tabulate(in.evolution, in.pair, GridSpec::exponential(60.0, 60), in.x0);
  const MarginResult m = class_margin(table, p);
  std::string detail = fmt("BVED margin %.6e", m.worst);
  if (m.argmax) detail += fmt(" at t=%.4f s=%.4f branch %.0f", m.argmax->p.t, m.argmax->p.s, m.argmax->branch);
  report(2, m.worst <= 1e-9, detail);
}

void criterion3() {
  const Instance in = make_instance("bved");
  WitnessSpec w = *in.witness("sin-peaks", C::kUED);
  w.n_min = 1;
  w.n_max = 8;
  double worst = 0.0;
  for (double log_n : {0.0, 2.5, 5.0, 10.0})
    for (double nu : {1e-3, 0.1, 1.0, 3.0, 10.0}) {
      const WitnessResult r = falsify(in.evolution, in.pair, w, {ClassParams::ued(log_n, nu, log_n, nu)}, in.x0);
      const auto& m = r.candidate_margins[0];
      for (std::size_t i = 1; i < m.size(); ++i)
        worst = std::max(worst, std::fabs(m[i] - m[i - 1] - 2 * std::numbers::pi));
    }
  report(3, worst <= 1e-6, fmt("max |increment - 2pi| %.3e over 20 constant sets", worst));
}

void criterion4() {
  const Instance in = make_instance("ed_gap");
  const double m = class_margin(in.evolution, in.pair, *in.claim(C::kED)->params, in.grid, in.x0);
  const WitnessResult w = falsify(in.evolution, in.pair, *in.witness("knot-drop", C::kBVED), in.x0);
  const double m3 = w.margins_log.size() >= 3 ? w.margins_log[2] : -INFINITY;
  report(4, m <= 1e-9 && m3 > 150.0, fmt("ED margin %.3e, knot-drop BVED margin at n=3 %.3f", m, m3));
}

// h = (-a t + q t sin t, b t + q2 t cos t), c = (c1, c2) over 1 + e^{-u}
Instance random_diagonal(std::mt19937_64& rng, double q_max, bool couple) {
  std::uniform_real_distribution<double> slope(0.5, 3.0), q(0.0, q_max), cc(0.0, 1.0);
  Instance in = make_instance("synth_ed");
  const double a = slope(rng), b = slope(rng);
  DiagonalCocycle& c = in.evolution.cocycle;
  c.h = {Expression{Term::poly({0.0, -a})}, Expression{Term::poly({0.0, b})}};
  if (q_max > 0.0) {
    c.h[0] = c.h[0] + Expression{Term::t_sin_t(q(rng))};
    c.h[1] = c.h[1] + Expression{Term::t_cos_t(q(rng))};
  }
  if (couple) c.c = {-cc(rng), cc(rng)};
  return in;
}

void criterion5() {
  std::mt19937_64 rng(5);
  double worst = -INFINITY;
  int certified = 0;
  const GridSpec poly = GridSpec::polynomial();
  for (int i = 0; i < 50; ++i) {
    const Instance in = random_diagonal(rng, 0.0, true);
    const Certificate ued = fit_class(in.evolution, in.pair, C::kUED, in.grid, in.x0);
    if (ued.verdict != Verdict::kCertified) continue;
    ++certified;
    const auto& b = ued.params.branch;
    const ClassParams upd = ClassParams::upd(std::max(b[0].log_n, b[1].log_n), b[0].rate, b[1].rate);
    worst = std::max(worst, class_margin(in.evolution, in.pair, upd, poly, in.x0));
  }
  report(5, certified == 50 && worst <= 1e-9,
         fmt("%.0f/50 UED certified, max UPD margin %.3e", certified, worst));
}

void criterion6() {
  std::mt19937_64 rng(6);
  const GridSpec poly = GridSpec::polynomial();
  double w_bv = -INFINITY, w_ed = -INFINITY;
  int ok_bv = 0, ok_ed = 0;
  double w_bv_src = -INFINITY;
  for (int i = 0; i < 50; ++i) {
    const Instance in = random_diagonal(rng, 0.0, true);
    // r_k <= -(slope_k + |c_k|)(t - s), so alpha_k = beta_k = slope_k + |c_k| with N = 1
    const DiagonalCocycle& cc = in.evolution.cocycle;
    const double r1 = -cc.h[0](1.0) - cc.c[0], r2 = cc.h[1](1.0) + cc.c[1];
    const ClassParams bved = ClassParams::bved(0.0, r1, r1, r2, r2);
    w_bv_src = std::max(w_bv_src, class_margin(in.evolution, in.pair, bved, in.grid, in.x0));
    const auto p = convert(bved, C::kBVPD);
    if (!p) continue;
    ++ok_bv;
    w_bv = std::max(w_bv, class_margin(in.evolution, in.pair, *p, poly, in.x0));
  }
  for (int i = 0; i < 50; ++i) {
    const Instance in = random_diagonal(rng, 0.4, true);
    const Certificate c = fit_class(in.evolution, in.pair, C::kED, in.grid, in.x0);
    if (c.verdict != Verdict::kCertified) continue;
    const auto p = convert(c.params, C::kPD);
    if (!p) continue;
    ++ok_ed;
    w_ed = std::max(w_ed, class_margin(in.evolution, in.pair, *p, poly, in.x0));
  }
  report(6, ok_bv == 50 && ok_ed == 50 && w_bv_src <= 1e-9 && w_bv <= 1e-9 && w_ed <= 1e-9,
         fmt("BVED margin %.3e, BVED->BVPD %.0f/50 max %.3e; ", w_bv_src, ok_bv, w_bv) + fmt("ED->PD %.0f/50 max %.3e", ok_ed, w_ed));
}

void criterion7() {
  const Instance in = make_instance("synth_ed");
  CriteriaParams p;
  p.gamma = 1.0;
  p.rho = 1.0;
  p.d = Gauge::constant(2.0);
  p.d_tilde = Gauge::constant(2.0);
  const StableEnvelope env{{0.0, 0.0, {}}, 2.0};
  const CriteriaReport r = check_criteria(in.evolution, in.pair, p, env, {}, in.x0);
  const double rel = std::max(r.crit_i.max_rel_error, r.crit_ii.max_rel_error);
  const bool ok = r.crit_i.certified && r.crit_ii.certified && rel < 1e-6 && r.tail_bound() < 1e-10;
  report(7, ok,
         fmt("slack (i) %.6e, (ii) %.6e, ", r.crit_i.worst_slack_log, r.crit_ii.worst_slack_log) +
             fmt("quadrature rel err %.3e, tail %.3e", rel, r.tail_bound()));
}

void criterion8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_vector = [&] {
    ModeVector v = ModeVector::zeros();
    for (double& a : v.a) a = 2 * u(rng) - 1;
    return v;
  };
  double law = 0.0;
  for (int i = 0; i < 200; ++i) {
    const ModeVector v = random_vector();
    const double t = u(rng), s = u(rng);
    const ModeVector a = semigroup_apply(v, t + s), b = semigroup_apply(semigroup_apply(v, s), t);
    for (int n = 0; n < v.size(); ++n) law = std::max(law, std::fabs(a.a[n] - b.a[n]));
  }
  int violations = 0;
  const GeneratorSpec g = GeneratorSpec::one_plus_exp_neg();
  for (int i = 0; i < 1000; ++i) {
    const ModeVector v = random_vector();
    const BasePoint x{g, 20 * u(rng)};
    const double s = 5 * u(rng);
    const double t1 = s + u(rng), t2 = t1 + u(rng);
    if (spectral_cocycle_apply(t2, s, x, v).norm() > spectral_cocycle_apply(t1, s, x, v).norm()) ++violations;
  }
  const double mode1 = semigroup_apply(ModeVector::basis(1), 0.1).a[1];
  const double err1 = std::fabs(mode1 - std::exp(-std::numbers::pi * std::numbers::pi / 10.0));
  report(8, law <= 1e-12 && violations == 0 && err1 <= 1e-12,
         fmt("semigroup err %.3e, monotonicity violations %.0f/1000, mode-1 err %.3e", law, violations, err1));
}

void criterion9() {
  const GeneratorSpec g = GeneratorSpec::one_plus_exp_neg();
  const double d = metric(BasePoint{g, 0.0}, BasePoint{g, kInfOffset}, 40, 64);
  report(9, std::fabs(d - 0.5) <= 1e-9, fmt("metric %.15f", d));
}

void criterion10() {
  const Instance in = make_instance("synth_ed");
  const Certificate c = fit_class(in.evolution, in.pair, C::kUED, in.grid, in.x0);
  const auto& b = c.params.branch;
  const double n = std::exp(std::max(b[0].log_n, b[1].log_n));
  const bool ok = c.verdict == Verdict::kCertified && std::fabs(b[0].rate - 2.0) <= 1e-3 &&
                  std::fabs(b[1].rate - 2.0) <= 1e-3 && n <= 1 + 1e-6;
  report(10, ok, fmt("nu1 %.9f nu2 %.9f N %.9f", b[0].rate, b[1].rate, n));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion11(const char* cli) {
  if (cli == nullptr) {
    report(11, false, "CLI path not given");
    return;
  }
  const auto dir = std::filesystem::temp_directory_path() / ("skewdich_accept_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto a = dir / "a.json", b = dir / "b.json";
  const std::string base = std::string("\"") + cli + "\" classify --gallery bved --out ";
  const int ra = std::system((base + "\"" + a.string() + "\" > /dev/null").c_str());
  const int rb = std::system((base + "\"" + b.string() + "\" > /dev/null").c_str());
  const std::string sa = slurp(a), sb = slurp(b);
  std::filesystem::remove_all(dir);
  report(11, ra == 0 && rb == 0 && !sa.empty() && sa == sb,
         fmt("exit codes %.0f/%.0f, report %.0f bytes, ", ra, rb, static_cast<double>(sa.size())) +
             (sa == sb ? "identical" : "different"));
}

}  // namespace

int main(int argc, char** argv) {
  const std::function<void()> checks[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                          criterion6, criterion7, criterion8, criterion9, criterion10};
  for (const auto& f : checks) {
    try {
      f();
    } catch (const std::exception& e) {
      std::printf("FAIL criterion ?: exception %s\n", e.what());
      ++g_failures;
    }
  }
  criterion11(argc > 1 ? argv[1] : nullptr);
  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
