#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "geophase/cli.hpp"
#include "geophase/io.hpp"
#include "geophase/selftest.hpp"
#include "support.hpp"

using namespace geophase;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

bool valid_phase_token(const std::string& s) {
  static const std::regex error_re("ERROR:[A-Za-z]+");
  if (s == "NEAR_CRITICAL" || std::regex_match(s, error_re)) return true;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    // pi itself prints as 3.14159265359 at 12 digits.
    const double top = std::stod(format_number(kPi));
    return used == s.size() && v > -top && v <= top;
  } catch (...) {
    return false;
  }
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "geophase_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("simple-sweep rows") {
  const Run r = run({"simple-sweep", "--Tmin", "0.5", "--Tmax", "1", "--Tnum", "2", "--steps", "256"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("# ", 0) == 0);
  CHECK(r.out.find("T,theta_U_numeric,theta_U_analytic,trace_magnitude,status\n") != std::string::npos);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(std::stod(rows[0][1]) == doctest::Approx(kPi));
  CHECK(std::stod(rows[0][2]) == doctest::Approx(kPi));
  CHECK(std::stod(rows[1][1]) == doctest::Approx(0.0));
  CHECK(std::stod(rows[1][2]) == doctest::Approx(0.0));
  CHECK(rows[0][4] == "ok");
}

TEST_CASE("simple-sweep brackets the jump") {
  const Run r = run({"simple-sweep", "--steps", "512"});
  REQUIRE(r.code == kExitOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 200);
  const double tc = 1.0 / std::acosh(2.0);
  int jumps = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& cell : {rows[i][1], rows[i][2]}) CHECK(valid_phase_token(cell));
    CHECK(std::abs(std::stod(rows[i][1]) - std::stod(rows[i][2])) < 1e-6);
    if (i == 0) continue;
    const double a = std::stod(rows[i - 1][1]), b = std::stod(rows[i][1]);
    if (std::abs(a - b) > 1.0) {
      ++jumps;
      CHECK(std::stod(rows[i - 1][0]) < tc);
      CHECK(std::stod(rows[i][0]) > tc);
    }
  }
  CHECK(jumps == 1);
}

TEST_CASE("tb4d rows") {
  auto theta = [](const std::vector<std::string>& args) {
    const Run r = run(args);
    REQUIRE(r.code == kExitOk);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 1);
    return std::stod(rows[0][3]);
  };
  CHECK(theta({"tb4d", "--m", "-3", "--T", "0.5"}) == doctest::Approx(kPi));
  CHECK(theta({"tb4d", "--m", "-3", "--T", "2"}) == doctest::Approx(0.0));

  const Run sweep = run({"tb4d", "--m", "-1.5", "--Tnum", "20"});
  REQUIRE(sweep.code == kExitOk);
  for (const auto& row : csv_rows(sweep.out)) CHECK(std::abs(std::stod(row[3])) < 1e-12);

  // Gap closure on the loop is a per-row marker.
  const Run gap = run({"tb4d", "--m", "-2", "--T", "0.5"});
  REQUIRE(gap.code == kExitOk);
  const auto rows = csv_rows(gap.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][3] == "ERROR:GapClosureOnPath");
  CHECK(valid_phase_token(rows[0][3]));

  const Run json = run({"tb4d", "--m", "-3", "--T", "0.5", "--format", "json"});
  const auto j = nlohmann::json::parse(json.out);
  CHECK(j[0]["theta_U"].get<double>() == doctest::Approx(kPi));
  CHECK(j[0]["I"].get<double>() == doctest::Approx(kPi * (testing::sech(2.0) - 1.0)));
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({"diagram", "--Tmin", "1", "--Tmax", "1"}).code == kExitUsage);
  CHECK(run({"simple-sweep", "--Tmin", "2", "--Tmax", "1"}).code == kExitUsage);
  CHECK(run({"simple-sweep", "--Tmin", "-1"}).code == kExitUsage);
  CHECK(run({"simple-sweep", "--bogus"}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"compare", "--model", "sphere"}).code == kExitUsage);
  CHECK(run({"compare", "--model", "explicit"}).code == kExitUsage);
  CHECK(run({"compare", "--model", "explicit", "--loop", "/nonexistent/loop.txt"}).code == kExitUsage);
  CHECK(run({"compare", "--steps", "4"}).code == kExitUsage);
  CHECK(run({"holonomy", "--kind", "uhlmann"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("numeric refusals exit 3") {
  const Run r = run({"holonomy", "--model", "tb4d", "--m", "-2", "--kind", "wz-minus", "--steps", "64"});
  CHECK(r.code == kExitNumeric);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("diagram output and dome fit") {
  const fs::path fit = scratch("fit.json");
  fs::remove(fit);
  const Run r = run({"diagram", "--fit-out", fit.string()});
  REQUIRE(r.code == kExitOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 81 * 60);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 4);
    CHECK(valid_phase_token(row[2]));
    const double m = std::stod(row[0]);
    // Dome confined to -4 < m < -2.
    if (row[2] != "NEAR_CRITICAL" && row[2].rfind("ERROR", 0) != 0 && std::abs(m + 3.0) > 1.0)
      CHECK(std::stod(row[2]) == 0.0);
  }
  const auto j = nlohmann::json::parse(slurp(fit));
  CHECK(j["A"].get<double>() >= 0.70);
  CHECK(j["A"].get<double>() <= 0.80);
  CHECK(j["p"].get<double>() >= 0.40);
  CHECK(j["p"].get<double>() <= 0.50);
  CHECK(j.contains("residual"));

  const Run empty = run({"diagram", "--mmin", "-1.5", "--mmax", "-0.5", "--mnum", "5", "--fit-out", fit.string()});
  CHECK(empty.code == kExitOk);
  CHECK(nlohmann::json::parse(slurp(fit))["error"] == "EmptyDome");
}

TEST_CASE("output is independent of thread count") {
  const fs::path a = scratch("a.csv"), b = scratch("b.csv");
  REQUIRE(run({"diagram", "--threads", "1", "--out", a.string()}).code == kExitOk);
  REQUIRE(run({"diagram", "--threads", "8", "--out", b.string()}).code == kExitOk);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());

  const Run s1 = run({"simple-sweep", "--steps", "128", "--threads", "1"});
  const Run s8 = run({"simple-sweep", "--steps", "128", "--threads", "8"});
  CHECK(s1.out == s8.out);
}

TEST_CASE("compare reports") {
  const Run eq = run({"compare", "--model", "equator", "--steps", "512"});
  REQUIRE(eq.code == kExitOk);
  const auto je = nlohmann::json::parse(eq.out);
  CHECK(je["verdict"] == "match");
  CHECK(je["theta_WZ"].get<double>() == doctest::Approx(kPi));
  CHECK(je["ladder"].size() == 5);

  const Run tb = run({"compare", "--model", "tb4d", "--m", "-3", "--steps", "512"});
  REQUIRE(tb.code == kExitOk);
  const auto jt = nlohmann::json::parse(tb.out);
  CHECK(jt["theta_U_limit"].get<double>() == doctest::Approx(kPi));
  CHECK(jt["wz_route"] == "transported");
  CHECK(jt["theta_WZ_analytic_gauge"].get<double>() == doctest::Approx(0.0));

  const fs::path loop = scratch("constant_loop.txt");
  {
    std::ofstream f(loop);
    f << "# constant loop\n";
    for (int k = 0; k < 9; ++k) f << "0.3 -0.2 0.5 0.1 0.7\n";
  }
  const Run c = run({"compare", "--model", "explicit", "--loop", loop.string()});
  REQUIRE(c.code == kExitOk);
  const auto jc = nlohmann::json::parse(c.out);
  CHECK(jc["verdict"] == "match");
  CHECK(jc["loop"]["family"] == "explicit");
  CHECK(std::abs(jc["theta_WZ"].get<double>()) < 1e-12);
}

TEST_CASE("selftest") {
  const Run r = run({"selftest", "--quick"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("selftest: all suites passed") != std::string::npos);
}

TEST_CASE("selftest catches a sign flip in the gamma form") {
  SelftestOptions opts;
  opts.quick = true;
  opts.gamma = [](const ParamPoint& p, const Vec5& dp, double t) {
    const double r2 = p.r.squaredNorm();
    Mat4 m = gamma_form_matrix(p, dp);
    m(0, 1) = -m(0, 1);
    return Mat4(-thermal_weight_chi(p.norm(), t) / (2.0 * r2) * m);
  };
  const auto results = run_selftest(opts);
  bool form_failed = false;
  for (const auto& s : results)
    if (s.name == "form-equivalence") form_failed = !s.passed;
  CHECK(form_failed);
  std::ostringstream out;
  CHECK_FALSE(report_selftest(results, out));
  CHECK(out.str().find("selftest: FAILED") != std::string::npos);

  // The unmutated form reproduces the library connection exactly.
  const ParamPoint p = testing::random_point();
  const Vec5 dp = testing::random_vec5();
  const Mat4 ref = -thermal_weight_chi(p.norm(), 0.7) / (2.0 * p.r.squaredNorm()) * gamma_form_matrix(p, dp);
  CHECK((ref - connection_gamma(p, dp, 0.7)).norm() < 1e-14);
}

TEST_CASE("holonomy JSON round trip") {
  const Run r = run({"holonomy", "--model", "equator", "--T", "0.5", "--steps", "256"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["dim"] == 4);
  CHECK(j["steps"] == 256);
  int steps = 0;
  const Eigen::MatrixXcd u = holonomy_from_json(j, &steps);
  CHECK(steps == 256);
  CHECK((u - equator_holonomy_closed_form(0.5, 1.0)).norm() < 1e-10);

  const Eigen::MatrixXcd m = testing::random_complex(3);
  const Eigen::MatrixXcd back = holonomy_from_json(holonomy_to_json(m, 7));
  CHECK((back - m).norm() < 1e-10);

  const Run wz = run({"holonomy", "--model", "equator", "--kind", "wz-minus", "--steps", "256"});
  const Eigen::MatrixXcd uw = holonomy_from_json(nlohmann::json::parse(wz.out));
  CHECK((uw + Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-10);

  try {
    holonomy_from_json(nlohmann::json::parse(R"({"dim": 2, "steps": 1, "matrix": [[[1, 0]]]})"));
    FAIL("expected Parse");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Parse);
  }
}

TEST_CASE("phase tokens") {
  CHECK(phase_token(make_phase(Complex(-1.0, 0.0))) == format_number(kPi));
  CHECK(phase_token(make_phase(Complex(-1.0, -0.0))) == format_number(kPi));
  CHECK(phase_token(make_phase(Complex(1e-12, 0.0))) == "NEAR_CRITICAL");
  PhaseCell cell;
  cell.status = CellStatus::Error;
  cell.error = Errc::GapClosureOnPath;
  CHECK(phase_token(cell) == "ERROR:GapClosureOnPath");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
}
