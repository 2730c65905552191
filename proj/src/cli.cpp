#include "geophase/cli.hpp"

#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "geophase/analysis.hpp"
#include "geophase/io.hpp"
#include "geophase/parallel.hpp"
#include "geophase/selftest.hpp"

namespace geophase {

namespace {

struct RunConfig {
  std::string model = "equator";
  double m = -3.0;
  std::optional<double> T;
  double R = 1.0;
  double t_min = 0.1, t_max = 10.0;
  int t_num = 200;
  bool log_t = true;
  double m_min = -5.0, m_max = -1.0;
  int m_num = 81;
  int steps = 4096;
  int quad = 64;
  std::string out_path;
  std::string format = "csv";
  unsigned threads = 0;
  bool quick = false;
  std::string loop_path;
  std::string fit_out;
  std::string kind = "uhlmann";
};

// Usage errors found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool usage_code(Errc code) {
  return code == Errc::InvalidArgument || code == Errc::Parse || code == Errc::OpenPath ||
         code == Errc::TooFewSegments;
}

int effective_steps(const RunConfig& c) { return c.quick ? std::max(kMinLoopSegments, c.steps / 8) : c.steps; }

std::vector<double> temperature_axis(const RunConfig& c) {
  if (!(c.t_min > 0.0)) throw UsageError("--Tmin must be positive");
  if (!(c.t_max > c.t_min)) throw UsageError("temperature range is empty (need Tmin < Tmax)");
  if (c.t_num < 2) throw UsageError("--Tnum must be at least 2");
  return make_axis({c.t_min, c.t_max}, c.t_num, c.log_t);
}

void require_positive_T(const RunConfig& c) {
  if (c.T && !(*c.T > 0.0)) throw UsageError("--T must be positive");
}

LoopPath build_loop(const RunConfig& c) {
  if (c.steps < kMinLoopSegments) throw UsageError("--steps must be at least 8");
  if (c.model == "equator") {
    if (!(c.R > 0.0)) throw UsageError("--R must be positive");
    LoopParams p;
    p.radius = c.R;
    return make_loop(LoopFamily::Equator, p, effective_steps(c));
  }
  if (c.model == "tb4d") {
    LoopParams p;
    p.m = c.m;
    return make_loop(LoopFamily::Tb4dKx, p, effective_steps(c));
  }
  if (c.loop_path.empty()) throw UsageError("--model explicit needs --loop <file>");
  return load_explicit_loop(c.loop_path);
}

std::string status_token(const PhaseResult& a, const PhaseResult& b) {
  return a.defined() && b.defined() ? "ok" : "near_critical";
}

int cmd_simple_sweep(const RunConfig& c, std::ostream& out) {
  const auto temps = temperature_axis(c);
  if (!(c.R > 0.0)) throw UsageError("--R must be positive");
  const LoopPath loop = build_loop(c);
  struct Row {
    PhaseResult numeric, analytic;
  };
  std::vector<Row> rows(temps.size());
  parallel_for(temps.size(), c.threads, [&](std::size_t i) {
    rows[i].numeric = phase(loop, temps[i]);
    rows[i].analytic = equator_phase_analytic(temps[i], c.R);
  });

  if (c.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < temps.size(); ++i)
      arr.push_back({{"T", std::stod(format_number(temps[i]))},
                     {"theta_U_numeric", phase_json(rows[i].numeric)},
                     {"theta_U_analytic", phase_json(rows[i].analytic)},
                     {"trace_magnitude", std::stod(format_number(rows[i].numeric.magnitude))},
                     {"status", status_token(rows[i].numeric, rows[i].analytic)}});
    out << arr.dump(2) << '\n';
    return kExitOk;
  }
  out << "# equator loop, R=" << format_number(c.R) << ", N=" << loop.steps()
      << "; T in units of R; angles in radians\n";
  out << "T,theta_U_numeric,theta_U_analytic,trace_magnitude,status\n";
  for (std::size_t i = 0; i < temps.size(); ++i)
    out << format_number(temps[i]) << ',' << phase_token(rows[i].numeric) << ',' << phase_token(rows[i].analytic)
        << ',' << format_number(rows[i].numeric.magnitude) << ',' << status_token(rows[i].numeric, rows[i].analytic)
        << '\n';
  return kExitOk;
}

int cmd_tb4d(const RunConfig& c, std::ostream& out) {
  require_positive_T(c);
  if (c.quad < 2 || c.quad % 2) throw UsageError("--quad must be an even number >= 2");
  const std::vector<double> temps = c.T ? std::vector<double>{*c.T} : temperature_axis(c);
  struct Row {
    double integral = 0.0;
    PhaseResult phase;
    std::optional<Errc> error;
  };
  std::vector<Row> rows(temps.size());
  parallel_for(temps.size(), c.threads, [&](std::size_t i) {
    try {
      rows[i].integral = tb4d_I(c.m, temps[i], c.quad);
      rows[i].phase = make_phase(Complex(std::cos(rows[i].integral), 0.0));
    } catch (const Error& e) {
      rows[i].error = e.code();
    }
  });

  auto theta = [](const Row& r) { return r.error ? error_token(*r.error) : phase_token(r.phase); };
  auto status = [](const Row& r) {
    return r.error ? std::string("error") : r.phase.defined() ? std::string("ok") : std::string("near_critical");
  };
  if (c.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < temps.size(); ++i) {
      const Row& r = rows[i];
      arr.push_back({{"m", std::stod(format_number(c.m))},
                     {"T", std::stod(format_number(temps[i]))},
                     {"I", r.error ? nlohmann::json() : nlohmann::json(std::stod(format_number(r.integral)))},
                     {"theta_U", r.error ? nlohmann::json(theta(r)) : phase_json(r.phase)},
                     {"status", status(r)}});
    }
    out << arr.dump(2) << '\n';
    return kExitOk;
  }
  out << "# 4D tight-binding kx loop, m=" << format_number(c.m)
      << "; T in units of R0 = R(m=-3); angles in radians\n";
  out << "m,T,I,theta_U,status\n";
  for (std::size_t i = 0; i < temps.size(); ++i) {
    const Row& r = rows[i];
    out << format_number(c.m) << ',' << format_number(temps[i]) << ','
        << (r.error ? std::string() : format_number(r.integral)) << ',' << theta(r) << ',' << status(r) << '\n';
  }
  return kExitOk;
}

int cmd_diagram(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!(c.t_min > 0.0)) throw UsageError("--Tmin must be positive");
  if (!(c.t_max > c.t_min)) throw UsageError("temperature range is empty (need Tmin < Tmax)");
  if (!(c.m_max > c.m_min)) throw UsageError("mass range is empty (need mmin < mmax)");
  if (c.t_num < 2 || c.m_num < 2) throw UsageError("--Tnum and --mnum must be at least 2");
  if (c.quad < 2 || c.quad % 2) throw UsageError("--quad must be an even number >= 2");

  DiagramOptions opts;
  opts.log_T = c.log_t;
  opts.threads = c.threads;
  opts.quad_points = c.quad;
  const PhaseDiagramGrid grid = phase_diagram({c.m_min, c.m_max}, c.m_num, {c.t_min, c.t_max}, c.t_num, opts);
  if (c.format == "json")
    out << diagram_to_json(grid).dump(2) << '\n';
  else
    write_diagram_csv(out, grid);

  if (!c.fit_out.empty()) {
    nlohmann::json fit_json;
    try {
      fit_json = dome_fit_to_json(dome_fit(grid));
    } catch (const Error& e) {
      err << "dome fit: " << e.what() << '\n';
      fit_json = {{"error", std::string(to_string(e.code()))}};
    }
    std::ofstream f(c.fit_out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + c.fit_out);
    f << fit_json.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_compare(const RunConfig& c, std::ostream& out) {
  const LoopPath loop = build_loop(c);
  const CorrespondenceReport report = correspondence(loop, default_ladder(loop_energy_scale(loop)), c.threads);
  out << correspondence_to_json(report).dump(2) << '\n';
  return kExitOk;
}

int cmd_holonomy(const RunConfig& c, std::ostream& out) {
  require_positive_T(c);
  const LoopPath loop = build_loop(c);
  Eigen::MatrixXcd u;
  if (c.kind == "uhlmann") {
    if (!c.T) throw UsageError("--kind uhlmann needs --T");
    u = holonomy(loop, *c.T).matrix;
  } else if (c.kind == "wz-minus") {
    u = wz_holonomy(loop, Band::Minus);
  } else if (c.kind == "wz-plus") {
    u = wz_holonomy(loop, Band::Plus);
  } else {
    u = zero_t_holonomy(loop).matrix;
  }
  out << holonomy_to_json(u, loop.steps()).dump(2) << '\n';
  return kExitOk;
}

int cmd_selftest(const RunConfig& c, std::ostream& out) {
  SelftestOptions opts;
  opts.steps = c.steps;
  opts.quick = c.quick;
  return report_selftest(run_selftest(opts), out) ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uhlmann and Wilczek-Zee geometric phases of a four-level Gamma-matrix model"};
  app.require_subcommand(1);
  RunConfig c;

  auto* sweep = app.add_subcommand("simple-sweep", "equator loop: theta_U against T");
  auto* tb4d = app.add_subcommand("tb4d", "4D tight-binding kx loop: I(m, T) and theta_U");
  auto* diagram = app.add_subcommand("diagram", "(m, T) Uhlmann phase diagram of the kx loop");
  auto* compare = app.add_subcommand("compare", "low-T Uhlmann phase against the scalar WZ phase");
  auto* selftest = app.add_subcommand("selftest", "run the invariant suites");
  auto* hol = app.add_subcommand("holonomy", "print one holonomy matrix as JSON");

  const std::vector<std::string> models{"equator", "tb4d", "explicit"};
  const std::vector<std::string> formats{"csv", "json"};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", c.out_path, "output file (default stdout)");
    sub->add_option("--threads", c.threads, "worker threads (0: hardware parallelism)");
  };
  auto add_loop = [&](CLI::App* sub) {
    sub->add_option("--model", c.model, "loop family")->check(CLI::IsMember(models));
    sub->add_option("--m", c.m, "mass term of the tight-binding loop");
    sub->add_option("--R", c.R, "equator radius |R|");
    sub->add_option("--steps", c.steps, "path segments N")->check(CLI::PositiveNumber);
    sub->add_option("--loop", c.loop_path, "explicit loop file (five reals per line)");
    sub->add_flag("--quick", c.quick, "N / 8");
  };
  auto add_t_range = [&](CLI::App* sub) {
    sub->add_option("--Tmin", c.t_min);
    sub->add_option("--Tmax", c.t_max);
    sub->add_option("--Tnum", c.t_num);
    sub->add_flag("--log,!--linear", c.log_t, "log-spaced temperatures");
  };
  auto add_format = [&](CLI::App* sub) { sub->add_option("--format", c.format)->check(CLI::IsMember(formats)); };

  add_common(sweep);
  add_loop(sweep);
  add_t_range(sweep);
  add_format(sweep);

  add_common(tb4d);
  tb4d->add_option("--m", c.m, "mass term");
  tb4d->add_option("--T", c.T, "single temperature instead of a sweep");
  tb4d->add_option("--quad", c.quad, "initial Simpson intervals (doubled until converged)");
  add_t_range(tb4d);
  add_format(tb4d);

  add_common(diagram);
  diagram->add_option("--mmin", c.m_min);
  diagram->add_option("--mmax", c.m_max);
  diagram->add_option("--mnum", c.m_num);
  diagram->add_option("--quad", c.quad, "initial Simpson intervals (doubled until converged)");
  diagram->add_option("--fit-out", c.fit_out, "write the dome fit JSON here");
  add_t_range(diagram);
  add_format(diagram);

  add_common(compare);
  add_loop(compare);

  selftest->add_option("--steps", c.steps, "path segments N")->check(CLI::PositiveNumber);
  selftest->add_flag("--quick", c.quick, "halve N and relax tolerances to 1e-4");

  add_common(hol);
  add_loop(hol);
  hol->add_option("--T", c.T, "temperature (uhlmann)");
  hol->add_option("--kind", c.kind)->check(CLI::IsMember({"uhlmann", "wz-minus", "wz-plus", "zero-t"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == static_cast<int>(CLI::ExitCodes::Success) ? kExitOk : kExitUsage;
  }

  // Sweep defaults differ by command: the diagram grid is linear in T.
  if (diagram->parsed()) {
    if (diagram->count("--Tmin") == 0) c.t_min = 0.02;
    if (diagram->count("--Tmax") == 0) c.t_max = 1.2;
    if (diagram->count("--Tnum") == 0) c.t_num = 60;
    if (diagram->count("--log") == 0) c.log_t = false;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  try {
    if (!c.out_path.empty()) {
      file.open(c.out_path, std::ios::binary);
      if (!file) throw UsageError("cannot write " + c.out_path);
      sink = &file;
    }
    if (sweep->parsed()) return cmd_simple_sweep(c, *sink);
    if (tb4d->parsed()) return cmd_tb4d(c, *sink);
    if (diagram->parsed()) return cmd_diagram(c, *sink, err);
    if (compare->parsed()) return cmd_compare(c, *sink);
    if (hol->parsed()) return cmd_holonomy(c, *sink);
    return cmd_selftest(c, *sink);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return usage_code(e.code()) ? kExitUsage : kExitNumeric;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"geophase"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace geophase
