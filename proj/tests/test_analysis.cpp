#include <doctest.h>

#include <cstring>

#include "geophase/analysis.hpp"
#include "geophase/linalg.hpp"
#include "support.hpp"

using namespace geophase;

namespace {

constexpr double kPi = std::numbers::pi;

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::InvalidArgument;
}

LoopPath kx_loop(double m, int n) {
  LoopParams params;
  params.m = m;
  return make_loop(LoopFamily::Tb4dKx, params, n);
}

// D(t) = diag(e^{2 pi i w t}, 1, 1, 1) or e^{2 pi i w t} 1, sampled at N + 1 points.
std::vector<Eigen::MatrixXcd> winding_family(int n, int w, bool scalar) {
  std::vector<Eigen::MatrixXcd> out;
  for (int k = 0; k <= n; ++k) {
    const Complex z = std::exp(Complex(0, 2 * kPi * w * (k % n) / n));
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Identity(4, 4);
    if (scalar)
      d *= z;
    else
      d(0, 0) = z;
    out.push_back(d);
  }
  return out;
}

}  // namespace

TEST_CASE("critical temperature") {
  const double exact = 1.0 / std::acosh(2.0);
  CHECK(equator_critical_temperature(1.0) == doctest::Approx(exact));
  CHECK(equator_critical_temperature(2.5) == doctest::Approx(2.5 * exact));

  const auto eq = critical_temperature(CriticalModel::Equator, 1.0, 0.1, 10.0);
  REQUIRE(eq.has_value());
  CHECK(std::abs(*eq - exact) < 1e-6);

  const auto tb = critical_temperature(CriticalModel::Tb4d, -3.0, 0.1, 10.0);
  REQUIRE(tb.has_value());
  CHECK(std::abs(*tb - exact) < 1e-6);

  // Ends on the same side: found by scanning.
  const auto scanned = critical_temperature(CriticalModel::Tb4d, -3.5, 0.01, 0.02);
  CHECK_FALSE(scanned.has_value());
  const auto wide = critical_temperature(CriticalModel::Tb4d, -3.5, 0.01, 100.0);
  REQUIRE(wide.has_value());
  CHECK(critical_indicator(CriticalModel::Tb4d, -3.5, *wide) == doctest::Approx(0.0).epsilon(1e-5));

  CHECK_FALSE(critical_temperature(CriticalModel::Tb4d, -1.5, 0.01, 10.0).has_value());
  CHECK(critical_indicator(CriticalModel::Equator, 1.0, 0.5) ==
        doctest::Approx(std::cos(kPi * (1.0 - testing::sech(2.0)))));
}

TEST_CASE("axes") {
  const auto lin = make_axis({-5.0, -1.0}, 81, false);
  REQUIRE(lin.size() == 81);
  CHECK(lin.front() == -5.0);
  CHECK(lin.back() == -1.0);
  CHECK(lin[40] == doctest::Approx(-3.0));
  const auto lg = make_axis({0.1, 10.0}, 3, true);
  CHECK(lg[0] == 0.1);
  CHECK(lg[1] == doctest::Approx(1.0));
  CHECK(lg[2] == 10.0);
}

TEST_CASE("phase diagram cells") {
  const auto grid = phase_diagram({-4.5, -1.5}, 7, {0.01, 10.0}, 2);
  REQUIRE(grid.cells.size() == 14);
  // m = -4.5, -4, -3.5, -3, -2.5, -2, -1.5
  for (std::size_t i : {2u, 3u, 4u}) {
    CHECK(grid.at(i, 0).status == CellStatus::Defined);
    CHECK(grid.at(i, 0).phase == doctest::Approx(kPi));
  }
  for (std::size_t i : {0u, 6u}) CHECK(grid.at(i, 0).phase == doctest::Approx(0.0));
  for (std::size_t i : {0u, 2u, 3u, 4u, 6u}) CHECK(grid.at(i, 1).phase == doctest::Approx(0.0));
  for (std::size_t i : {1u, 5u}) {
    for (std::size_t j : {0u, 1u}) {
      CHECK(grid.at(i, j).status == CellStatus::Error);
      CHECK(grid.at(i, j).error == Errc::GapClosureOnPath);
    }
  }
  CHECK(code_of([] { phase_diagram({-4, -2}, 3, {0.0, 1.0}, 3); }) == Errc::NonpositiveTemperature);
}

TEST_CASE("phase diagram is independent of thread count") {
  DiagramOptions one, many;
  one.threads = 1;
  many.threads = 8;
  const auto a = phase_diagram({-5, -1}, 41, {0.02, 1.2}, 30, one);
  const auto b = phase_diagram({-5, -1}, 41, {0.02, 1.2}, 30, many);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    CHECK(a.cells[k].status == b.cells[k].status);
    CHECK(std::memcmp(&a.cells[k].phase, &b.cells[k].phase, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.cells[k].magnitude, &b.cells[k].magnitude, sizeof(double)) == 0);
  }
}

TEST_CASE("dome fit") {
  const auto grid = phase_diagram({-5, -1}, 81, {0.02, 1.2}, 60);
  const DomeFit fit = dome_fit(grid);
  CHECK(fit.amplitude >= 0.70);
  CHECK(fit.amplitude <= 0.80);
  CHECK(fit.exponent >= 0.40);
  CHECK(fit.exponent <= 0.50);
  CHECK(fit.residual < 0.05);
  REQUIRE_FALSE(fit.boundary.empty());
  for (const auto& b : fit.boundary) {
    CHECK(std::abs(b.m + 3.0) <= 0.95 + 1e-12);
    // Each refined boundary is a zero of cos I.
    CHECK(std::abs(critical_indicator(CriticalModel::Tb4d, b.m, b.t_c)) < 1e-3);
  }

  const auto trivial = phase_diagram({-1.5, -0.5}, 5, {0.02, 1.2}, 10);
  CHECK(code_of([&] { dome_fit(trivial); }) == Errc::EmptyDome);
}

TEST_CASE("winding number") {
  const auto constant = std::vector<Eigen::MatrixXcd>(17, Eigen::MatrixXcd::Identity(4, 4));
  CHECK(winding_number(constant).kappa == 0);

  const WindingResult one = winding_number(winding_family(64, 1, false));
  CHECK(one.kappa == 1);
  CHECK(one.residual < 1e-6);
  const WindingResult four = winding_number(winding_family(64, 1, true));
  CHECK(four.kappa == 4);
  CHECK(four.residual < 1e-6);
  CHECK(winding_number(winding_family(128, -2, false)).kappa == -2);

  // Concatenation adds.
  auto joined = winding_family(64, 1, false);
  const auto second = winding_family(64, 1, true);
  joined.insert(joined.end(), second.begin() + 1, second.end());
  CHECK(winding_number(joined).kappa == 5);

  auto open = winding_family(64, 1, false);
  open.back()(0, 0) += 1e-6;
  CHECK(code_of([&] { winding_number(open); }) == Errc::NotClosed);
  CHECK(code_of([] { winding_number(winding_family(8, 1, true)); }) == Errc::StepTooLarge);
}

TEST_CASE("zero-temperature connection") {
  for (int trial = 0; trial < 30; ++trial) {
    const ParamPoint p = sphere_point(testing::uniform(0.2, 2.9), testing::uniform(0, 2 * kPi), 1.0);
    const Vec5 dp = testing::random_vec5();
    const Mat4 z = zero_t_connection(p, dp);
    CHECK((connection_gamma(p, dp, 1e-4) - z).norm() < 1e-3);
    CHECK(anti_hermiticity_defect(z) < 1e-12);
    const Mat4 v = eigensystem_analytic(p).vectors;
    const Mat4 eb = v.adjoint() * z * v;
    CHECK(eb.topLeftCorner<2, 2>().norm() < 1e-10);
    CHECK(eb.bottomRightCorner<2, 2>().norm() < 1e-10);
    // The rotation term alone carries minus the WZ blocks.
    const Mat4 rot = v.adjoint() * frame_rotation_generator(p, dp) * v;
    const Mat4 wz = v.adjoint() * wz_connection_operator(p, dp) * v;
    CHECK((rot.topLeftCorner<2, 2>() - wz.topLeftCorner<2, 2>()).norm() < 1e-10);
    CHECK(zero_t_connection(p, Vec5::Zero()).norm() == 0.0);
  }
}

TEST_CASE("equator holonomy decomposes at low temperature") {
  const LoopPath loop = make_loop(LoopFamily::Equator, {}, 1024);
  const Mat4 u = holonomy(loop, 1e-3).matrix;
  CHECK((u - zero_t_holonomy(loop).matrix).norm() < 1e-4);
}

TEST_CASE("commutator of the WZ operator with the frame rotation") {
  // Oracle assembled directly from the closed-form frames.
  auto oracle = [](const ParamPoint& p, const Vec5& dp) {
    Mat4 a = Mat4::Zero(), g = Mat4::Zero();
    for (Band band : {Band::Minus, Band::Plus}) {
      const Frame f = analytic_frame(p, band);
      const Frame df = analytic_frame_derivative(p, dp, band);
      a += f * (f.adjoint() * df) * f.adjoint();
      g += df * f.adjoint();
    }
    return (a * g - g * a).norm();
  };
  for (double theta : {0.4, 1.0, kPi / 2, 2.5}) {
    for (double phi : {0.0, 1.0, 3.0}) {
      const ParamPoint p = sphere_point(theta, phi, 1.0);
      const Vec5 dp = testing::sphere_phi_tangent(theta, phi, 1.0);
      CHECK(std::abs(wz_commutator_norm(p, dp) - oracle(p, dp)) < 1e-12);
    }
  }
  // Zero along the equator in this gauge, nonzero off it.
  CHECK(wz_commutator_norm(sphere_point(kPi / 2, 1.0, 1.0), testing::sphere_phi_tangent(kPi / 2, 1.0, 1.0)) < 1e-12);
  CHECK(wz_commutator_norm(sphere_point(1.0, 1.0, 1.0), testing::sphere_phi_tangent(1.0, 1.0, 1.0)) > 0.1);
}

TEST_CASE("unitary families") {
  const LoopPath eq = make_loop(LoopFamily::Equator, {}, 256);
  CHECK(is_unitary_family(eq));
  CHECK(is_unitary_family(kx_loop(-3.0, 256)));
  CHECK_FALSE(is_unitary_family(kx_loop(-2.5, 256)));

  for (const LoopPath& loop : {eq, kx_loop(-3.0, 256)}) {
    const auto d = unitary_family(loop);
    REQUIRE(d.size() == loop.samples.size());
    CHECK((d.front() - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-12);
    CHECK((d.back() - d.front()).norm() < 1e-9);
    for (const auto& m : d) CHECK(unitarity_defect(m) < 1e-10);
    CHECK(winding_number(d).residual < 1e-6);
  }
}

TEST_CASE("default ladder") {
  const auto ladder = default_ladder(2.0);
  REQUIRE(ladder.size() == 5);
  CHECK(ladder.front() == doctest::Approx(0.2));
  CHECK(ladder.back() == doctest::Approx(2e-3));
  CHECK(loop_energy_scale(make_loop(LoopFamily::Equator, {2.0, -3.0}, 64)) == doctest::Approx(2.0));
}

TEST_CASE("correspondence on the equator") {
  const LoopPath loop = make_loop(LoopFamily::Equator, {}, 512);
  const auto r = correspondence(loop, default_ladder(1.0));
  CHECK(r.verdict == Verdict::Match);
  CHECK(r.ladder_converged);
  CHECK(r.theta_u_limit == doctest::Approx(kPi));
  CHECK(r.theta_wz.phase == doctest::Approx(kPi));
  CHECK(r.wz_route == WZRoute::AnalyticGauge);
  CHECK(r.unitary_family);
  CHECK(r.kappa.has_value());
  CHECK(r.commutator_norm.has_value());
  CHECK(std::abs(r.theta_u.back().phase - kPi) < 1e-3);
}

TEST_CASE("correspondence on a constant loop") {
  const LoopPath loop = make_explicit_loop(std::vector<ParamPoint>(9, testing::random_point()));
  const auto r = correspondence(loop, default_ladder(loop_energy_scale(loop)));
  CHECK(r.verdict == Verdict::Match);
  CHECK(r.theta_u_limit == doctest::Approx(0.0));
  CHECK(r.theta_wz.phase == doctest::Approx(0.0));
}

TEST_CASE("correspondence on the kx loop") {
  const auto r = correspondence(kx_loop(-3.0, 512), default_ladder(1.0));
  CHECK(r.theta_u_limit == doctest::Approx(kPi));
  // Gauge-invariant transport gives pi; the singular closed-form gauge gives 0.
  CHECK(r.wz_route == WZRoute::Transported);
  CHECK(r.theta_wz.phase == doctest::Approx(kPi));
  REQUIRE(r.theta_wz_analytic_gauge.has_value());
  CHECK(*r.theta_wz_analytic_gauge == doctest::Approx(0.0));
  CHECK(r.verdict == Verdict::Match);
}

TEST_CASE("correspondence ladder validation") {
  const LoopPath loop = make_loop(LoopFamily::Equator, {}, 64);
  CHECK(code_of([&] { correspondence(loop, {0.1, 0.01, 0.001}); }) == Errc::InvalidArgument);
  CHECK(code_of([&] { correspondence(loop, {0.001, 0.01, 0.1, 1.0}); }) == Errc::InvalidArgument);
}
