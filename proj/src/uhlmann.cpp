#include "geophase/uhlmann.hpp"

#include <cmath>
#include <numbers>

#include "geophase/error.hpp"

namespace geophase {

namespace {

constexpr double kRankFloor = 1e-14;

void require_temperature(double temperature) {
  if (!(temperature > 0.0)) throw Error(Errc::NonpositiveTemperature, "T must be positive");
}

void require_full_rank(const EigenSystem<Mat4>& eig) {
  if (eig.values.minCoeff() <= kRankFloor)
    throw Error(Errc::RankDeficient, "density matrix is not full rank");
}

}  // namespace

Mat4 connection_spectral(const EigenSystem<Mat4>& rho_eig, const Mat4& drho) {
  require_full_rank(rho_eig);
  const Mat4& v = rho_eig.vectors;
  const Mat4 d = v.adjoint() * drho * v;
  const Eigen::Vector4d lambda = rho_eig.values;
  const Eigen::Vector4d root = lambda.cwiseSqrt();
  Mat4 a;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const Complex dsqrt = d(i, j) / (root(i) + root(j));
      const Complex comm = dsqrt * (root(j) - root(i));  // [d sqrt(rho), sqrt(rho)]_ij
      a(i, j) = -comm / (lambda(i) + lambda(j));
    }
  }
  return v * a * v.adjoint();
}

Mat4 gamma_form_matrix(const ParamPoint& p, const Vec5& dp) {
  const double r1 = p.r(0), r2 = p.r(1), r3 = p.r(2), r4 = p.r(3), r5 = p.r(4);
  const double d1 = dp(0), d2 = dp(1), d3 = dp(2), d4 = dp(3), d5 = dp(4);
  const Complex i = kI;
  Mat4 m;
  m(0, 0) = i * (r2 * d1 - r1 * d2 + r4 * d3 - r3 * d4);
  m(0, 1) = (r1 - i * r2) * (d3 - i * d4) - (r3 - i * r4) * (d1 - i * d2);
  m(0, 2) = -r5 * d3 + i * r5 * d4 + (r3 - i * r4) * d5;
  m(0, 3) = -r5 * d1 + i * r5 * d2 + (r1 - i * r2) * d5;
  m(1, 0) = (r3 + i * r4) * (d1 + i * d2) - (r1 + i * r2) * (d3 + i * d4);
  m(1, 1) = i * (-r2 * d1 + r1 * d2 - r4 * d3 + r3 * d4);
  m(1, 2) = (r1 + i * r2) * d5 - r5 * (d1 + i * d2);
  m(1, 3) = r5 * d3 + i * r5 * d4 - (r3 + i * r4) * d5;
  m(2, 0) = r5 * d3 + i * r5 * d4 - (r3 + i * r4) * d5;
  m(2, 1) = r5 * d1 - i * r5 * d2 - (r1 - i * r2) * d5;
  m(2, 2) = i * (r2 * d1 - r1 * d2 - r4 * d3 + r3 * d4);
  m(2, 3) = (r1 - i * r2) * (d3 + i * d4) - (r3 + i * r4) * (d1 - i * d2);
  m(3, 0) = r5 * d1 + i * r5 * d2 - (r1 + i * r2) * d5;
  m(3, 1) = -r5 * d3 + i * r5 * d4 + (r3 - i * r4) * d5;
  m(3, 2) = (r3 - i * r4) * (d1 + i * d2) - (r1 + i * r2) * (d3 - i * d4);
  m(3, 3) = i * (-r2 * d1 + r1 * d2 + r4 * d3 - r3 * d4);
  return m;
}

Mat4 connection_gamma(const ParamPoint& p, const Vec5& dp, double temperature) {
  require_temperature(temperature);
  require_gap(p);
  const double r = p.norm();
  const double chi = thermal_weight_chi(r, temperature);
  return (-chi / (2.0 * r * r)) * gamma_form_matrix(p, dp);
}

Mat4 connection_alt(const EigenSystem<Mat4>& rho_eig, const Mat4& dvectors) {
  require_full_rank(rho_eig);
  const Mat4& v = rho_eig.vectors;
  const Mat4 overlap = v.adjoint() * dvectors;  // <i|d j>
  const Eigen::Vector4d lambda = rho_eig.values;
  const Eigen::Vector4d root = lambda.cwiseSqrt();
  Mat4 a = Mat4::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const double gap = root(i) - root(j);
      a(i, j) = -(gap * gap / (lambda(i) + lambda(j))) * overlap(i, j);
    }
  }
  return v * a * v.adjoint();
}

EigenSystem<Mat4> thermal_eigensystem_analytic(const ParamPoint& p, double temperature) {
  const ThermalState state = thermal_density(p, temperature);
  EigenSystem<Mat4> eig;
  eig.vectors.leftCols<2>() = analytic_frame(p, Band::Plus);
  eig.vectors.rightCols<2>() = analytic_frame(p, Band::Minus);
  eig.values << state.lambda_plus, state.lambda_plus, state.lambda_minus, state.lambda_minus;
  return eig;
}

Mat4 connection_alt(const ParamPoint& p, const Vec5& dp, double temperature) {
  const EigenSystem<Mat4> eig = thermal_eigensystem_analytic(p, temperature);
  Mat4 dv;
  dv.leftCols<2>() = analytic_frame_derivative(p, dp, Band::Plus);
  dv.rightCols<2>() = analytic_frame_derivative(p, dp, Band::Minus);
  return connection_alt(eig, dv);
}

Mat4 eigenbasis_derivative_fd(const EigenSystem<Mat4>& prev, const EigenSystem<Mat4>& center,
                              const EigenSystem<Mat4>& next, double h) {
  const auto clusters = degenerate_clusters(center.values, center.values.cwiseAbs().maxCoeff());
  auto aligned = [&](const Mat4& other) {
    Mat4 out = other;
    for (const auto& [start, size] : clusters) {
      const Eigen::MatrixXcd mine = other.middleCols(start, size);
      const Eigen::MatrixXcd ref = center.vectors.middleCols(start, size);
      const Eigen::MatrixXcd overlap = mine.adjoint() * ref;
      const Eigen::MatrixXcd gram = overlap.adjoint() * overlap;
      const double smallest = herm_eig(gram).values(0);
      if (!(smallest > 0.25))
        throw Error(Errc::GaugeDiscontinuity, "adjacent eigenbases overlap too weakly");
      out.middleCols(start, size) = mine * polar_unitary(overlap);
    }
    return out;
  };
  return (aligned(next.vectors) - aligned(prev.vectors)) / (2.0 * h);
}

Mat4 sqrt_density(const ThermalState& state) {
  return std::sqrt(state.lambda_plus) * state.proj.plus + std::sqrt(state.lambda_minus) * state.proj.minus;
}

Mat4 purify(const ThermalState& state, const Mat4& phase_factor) {
  return sqrt_density(state) * phase_factor;
}

Holonomy path_ordered(const LoopPath& loop, const std::function<Mat4(const LoopSegment&)>& connection) {
  Holonomy h;
  h.steps = loop.steps();
  for (const auto& segment : loop.segments) {
    const Mat4 a = connection(segment);
    h.matrix = unitary_exp(Mat4(-a)) * h.matrix;
  }
  return h;
}

Holonomy holonomy(const LoopPath& loop, double temperature, const ConnectionFn& connection) {
  require_temperature(temperature);
  return path_ordered(loop, [&](const LoopSegment& s) {
    return connection(s.midpoint, s.step, temperature);
  });
}

Holonomy holonomy(const LoopPath& loop, double temperature) {
  return holonomy(loop, temperature, connection_gamma);
}

PhaseResult phase_of(const LoopPath& loop, double temperature, const Holonomy& u) {
  const Mat4 rho0 = thermal_rho(loop.start(), temperature);
  return make_phase((rho0 * u.matrix).trace());
}

PhaseResult phase(const LoopPath& loop, double temperature) {
  return phase_of(loop, temperature, holonomy(loop, temperature));
}

Mat4 equator_holonomy_closed_form(double temperature, double radius) {
  require_temperature(temperature);
  const double angle = std::numbers::pi * thermal_weight_chi(radius, temperature);
  Mat4 u = Mat4::Zero();
  u(0, 0) = std::polar(1.0, -angle);
  u(1, 1) = std::polar(1.0, angle);
  u(2, 2) = u(3, 3) = std::cos(angle);
  u(2, 3) = u(3, 2) = kI * std::sin(angle);
  return u;
}

PhaseResult equator_phase_analytic(double temperature, double radius) {
  require_temperature(temperature);
  const double chi = thermal_weight_chi(radius, temperature);
  return make_phase(Complex(std::cos(std::numbers::pi * chi), 0.0));
}

double tb4d_I(double m, double temperature, int quad_points) {
  require_temperature(temperature);
  if (quad_points < 2 || quad_points % 2 != 0)
    throw Error(Errc::InvalidArgument, "quadrature needs an even number of intervals");
  const double a = m + 3.0;
  if (!(std::abs(std::abs(a) - 1.0) > kGapFloor))
    throw Error(Errc::GapClosureOnPath, "gap closes on the kx loop at |m+3| = 1");

  auto integrand = [&](double k) {
    const double r2 = a * a + 2.0 * a * std::cos(k) + 1.0;
    const double r = std::sqrt(r2);
    return (1.0 / std::cosh(r / temperature) - 1.0) / (2.0 * r2) * (a * std::cos(k) + 1.0);
  };

  // Periodic trapezoid sums; Simpson on 2n intervals is (4 T_2n - T_n) / 3.
  constexpr double two_pi = 2.0 * std::numbers::pi;
  int n = quad_points / 2;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) sum += integrand(two_pi * j / n);
  double trap = two_pi / n * sum;
  double previous = 0.0;
  bool have_previous = false;
  while (true) {
    double mids = 0.0;
    for (int j = 0; j < n; ++j) mids += integrand(two_pi * (j + 0.5) / n);
    sum += mids;
    n *= 2;
    const double trap2 = two_pi / n * sum;
    const double simpson = (4.0 * trap2 - trap) / 3.0;
    if (have_previous && std::abs(simpson - previous) < 1e-9) return simpson;
    if (n >= (1 << 20)) throw Error(Errc::NoConvergence, "tb4d_I: quadrature did not converge");
    previous = simpson;
    have_previous = true;
    trap = trap2;
  }
}

Mat4 tb4d_holonomy_closed_form(double integral) {
  const double c = std::cos(integral), s = std::sin(integral);
  Mat4 u = Mat4::Zero();
  u.diagonal().setConstant(c);
  u(0, 3) = s;
  u(1, 2) = s;
  u(2, 1) = -s;
  u(3, 0) = -s;
  return u;
}

PhaseResult tb4d_phase_analytic(double m, double temperature, int quad_points) {
  return make_phase(Complex(std::cos(tb4d_I(m, temperature, quad_points)), 0.0));
}

double transport_check(const LoopPath& loop, double temperature) {
  require_temperature(temperature);
  const double dt = 1.0 / loop.steps();
  Mat4 u = Mat4::Identity();
  Mat4 w_prev = purify(thermal_density(loop.samples.front(), temperature), u);
  double worst = 0.0;
  for (std::size_t k = 0; k < loop.segments.size(); ++k) {
    const auto& seg = loop.segments[k];
    u = unitary_exp(Mat4(-connection_gamma(seg.midpoint, seg.step, temperature))) * u;
    const Mat4 w_next = purify(thermal_density(loop.samples[k + 1], temperature), u);
    const Mat4 x = w_prev.adjoint() * (w_next - w_prev);
    worst = std::max(worst, (x - x.adjoint()).norm() / dt);
    w_prev = w_next;
  }
  return worst;
}

}  // namespace geophase
