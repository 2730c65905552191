#include "geophase/selftest.hpp"

#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "geophase/io.hpp"
#include "geophase/linalg.hpp"
#include "geophase/model.hpp"

namespace geophase {

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;
};

using SuiteFn = std::function<void(Check&)>;

SuiteResult run_suite(const std::string& name, const SuiteFn& fn) {
  SuiteResult r;
  r.name = name;
  Check c;
  try {
    fn(c);
    r.passed = c.ok;
    r.detail = c.detail.str();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

void expect_below(Check& c, const char* label, double value, double limit) {
  if (!(value < limit)) c.ok = false;
  c.detail << label << '=' << format_number(value) << (value < limit ? " " : " (limit " + format_number(limit) + ") ");
}

LoopPath chord_equator(int segments, double radius) {
  std::vector<ParamPoint> samples;
  for (int k = 0; k < segments; ++k)
    samples.push_back(sphere_point(std::numbers::pi / 2, 2.0 * std::numbers::pi * k / segments, radius));
  samples.push_back(samples.front());
  return make_explicit_loop(std::move(samples));
}

}  // namespace

std::vector<SuiteResult> run_selftest(const SelftestOptions& options) {
  const int steps = options.quick ? options.steps / 2 : options.steps;
  const double tol = options.quick ? 1e-4 : 1e-6;
  const double form_tol = options.quick ? 1e-4 : 1e-9;
  std::vector<SuiteResult> results;

  results.push_back(run_suite("clifford", [](Check& c) {
    const auto& g = gamma_matrices().gamma;
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      worst = std::max(worst, hermiticity_defect(g[i]));
      for (int j = 0; j < 5; ++j) {
        const Mat4 anti = g[i] * g[j] + g[j] * g[i];
        worst = std::max(worst, (anti - (i == j ? 2.0 : 0.0) * Mat4::Identity()).norm());
      }
    }
    expect_below(c, "defect", worst, 1e-14);
  }));

  // 100 seeded random (p, dp, T); T log-uniform in [0.1, 10] |R|.
  std::mt19937_64 rng(20250101);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> log_t(std::log(0.1), std::log(10.0));
  struct Sample {
    ParamPoint p;
    Vec5 dp;
    double t;
  };
  std::vector<Sample> samples;
  for (int k = 0; k < 100; ++k) {
    Sample s;
    for (int i = 0; i < 5; ++i) s.p.r(i) = normal(rng);
    for (int i = 0; i < 5; ++i) s.dp(i) = normal(rng);
    s.t = s.p.norm() * std::exp(log_t(rng));
    samples.push_back(s);
  }

  results.push_back(run_suite("form-equivalence", [&](Check& c) {
    double spectral = 0.0, alt = 0.0;
    for (const auto& s : samples) {
      const Mat4 a = options.gamma(s.p, s.dp, s.t);
      const auto eig = herm_eig(thermal_rho(s.p, s.t));
      spectral = std::max(spectral, (a - connection_spectral(eig, thermal_rho_derivative(s.p, s.dp, s.t))).norm());
      alt = std::max(alt, (a - connection_alt(s.p, s.dp, s.t)).norm());
    }
    expect_below(c, "gamma-spectral", spectral, form_tol);
    expect_below(c, "gamma-alt", alt, form_tol);
  }));

  results.push_back(run_suite("unitarity", [&](Check& c) {
    const LoopPath loop = make_loop(LoopFamily::Equator, {}, steps);
    double worst = 0.0, anti = 0.0;
    for (double t : {0.3, 0.759, 2.0}) worst = std::max(worst, unitarity_defect(holonomy(loop, t, options.gamma).matrix));
    for (const auto& s : samples) anti = std::max(anti, anti_hermiticity_defect(options.gamma(s.p, s.dp, s.t)));
    expect_below(c, "holonomy", worst, 1e-10);
    expect_below(c, "anti-hermitian", anti, 1e-10);
  }));

  results.push_back(run_suite("block-vanishing", [&](Check& c) {
    double worst = 0.0;
    for (const auto& s : samples) {
      const Mat4 v = eigensystem_analytic(s.p).vectors;
      const Mat4 a = v.adjoint() * options.gamma(s.p, s.dp, s.t) * v;
      worst = std::max({worst, a.topLeftCorner<2, 2>().norm(), a.bottomRightCorner<2, 2>().norm()});
    }
    expect_below(c, "diagonal-blocks", worst, options.quick ? 1e-6 : 1e-10);
  }));

  results.push_back(run_suite("richardson", [&](Check& c) {
    const int coarse = std::max(kMinLoopSegments, steps / 32);
    const Mat4 exact = equator_holonomy_closed_form(1.0, 1.0);
    const double e1 = (holonomy(chord_equator(coarse, 1.0), 1.0, options.gamma).matrix - exact).norm();
    const double e2 = (holonomy(chord_equator(2 * coarse, 1.0), 1.0, options.gamma).matrix - exact).norm();
    const double ratio = e1 / e2;
    c.detail << "N=" << coarse << " ";
    if (!(ratio >= 3.5)) c.ok = false;
    c.detail << "ratio=" << format_number(ratio);
  }));

  results.push_back(run_suite("closed-forms", [&](Check& c) {
    const LoopPath equator = make_loop(LoopFamily::Equator, {}, steps);
    double hol = 0.0, ph = 0.0;
    for (double t : {0.3, 0.759, 2.0}) {
      const Holonomy u = holonomy(equator, t, options.gamma);
      hol = std::max(hol, (u.matrix - equator_holonomy_closed_form(t, 1.0)).norm());
      ph = std::max(ph, angle_distance(phase_of(equator, t, u).phase, equator_phase_analytic(t, 1.0).phase));
    }
    LoopParams tb;
    tb.m = -3.0;
    const LoopPath kx = make_loop(LoopFamily::Tb4dKx, tb, steps);
    double tb_hol = 0.0;
    for (double t : {0.3, 0.5, 2.0})
      tb_hol = std::max(tb_hol, (holonomy(kx, t, options.gamma).matrix - tb4d_holonomy_closed_form(tb4d_I(-3.0, t))).norm());
    expect_below(c, "equator", hol, tol);
    expect_below(c, "phase", ph, tol);
    expect_below(c, "tb4d", tb_hol, tol);
  }));

  return results;
}

bool report_selftest(const std::vector<SuiteResult>& results, std::ostream& out) {
  bool all = true;
  for (const auto& r : results) {
    char name[24];
    std::snprintf(name, sizeof name, "%-18s", r.name.c_str());
    out << name << (r.passed ? "PASS  " : "FAIL  ") << r.detail << '\n';
    all = all && r.passed;
  }
  out << (all ? "selftest: all suites passed\n" : "selftest: FAILED\n");
  return all;
}

}  // namespace geophase
