#include "geophase/model.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include "geophase/error.hpp"

namespace geophase {

namespace {

Mat2 pauli(int k) {
  Mat2 s;
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -kI, kI, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

GammaSet build_gammas() {
  GammaSet g;
  g.gamma[0] = kron(pauli(1), pauli(1));
  g.gamma[1] = kron(pauli(1), pauli(2));
  g.gamma[2] = kron(pauli(1), pauli(3));
  g.gamma[3] = kron(pauli(2), pauli(0));
  g.gamma[4] = kron(pauli(3), pauli(0));
  return g;
}

// sign = +1 for Plus (a, b), -1 for Minus (c, d).
double band_sign(Band band) { return band == Band::Plus ? 1.0 : -1.0; }

}  // namespace

Mat4 GammaSet::commutator(int a, int b) const {
  return 0.5 * kI * (gamma[a] * gamma[b] - gamma[b] * gamma[a]);
}

const GammaSet& gamma_matrices() {
  static const GammaSet set = build_gammas();
  return set;
}

Mat4 hamiltonian(const ParamPoint& p) {
  const auto& g = gamma_matrices().gamma;
  Mat4 h = Mat4::Zero();
  for (int i = 0; i < 5; ++i) h += p.r(i) * g[i];
  return h;
}

void require_gap(const ParamPoint& p) {
  if (!(p.norm() > kGapFloor)) throw Error(Errc::GapClosure, "|R| below gap floor");
}

bool near_pole(const ParamPoint& p, Band band) {
  const double r = p.norm();
  return !(r - band_sign(band) * p.r(4) > kPoleFloor * r);
}

void require_off_pole(const ParamPoint& p, Band band) {
  require_gap(p);
  if (near_pole(p, band))
    throw Error(Errc::GaugePole, "analytic eigenvectors singular at |R5| = |R|");
}

Frame analytic_frame(const ParamPoint& p, Band band) {
  require_off_pole(p, band);
  const Vec5& x = p.r;
  const double r = p.norm();
  const double s = band_sign(band);
  const double n = std::sqrt(2.0 * r * (r - s * x(4)));
  Frame f;
  f.col(0) << Complex(-x(2), x(3)), Complex(-x(0), -x(1)), x(4) - s * r, 0.0;
  f.col(1) << Complex(-x(0), x(1)), Complex(x(2), x(3)), 0.0, x(4) - s * r;
  return f / n;
}

Frame analytic_frame_derivative(const ParamPoint& p, const Vec5& dp, Band band) {
  require_off_pole(p, band);
  const Vec5& x = p.r;
  const double r = p.norm();
  const double dr = x.dot(dp) / r;
  const double s = band_sign(band);
  const double n2 = 2.0 * r * (r - s * x(4));
  const double n = std::sqrt(n2);
  const double dn = (dr * (r - s * x(4)) + r * (dr - s * dp(4))) / n;

  Frame v;
  v.col(0) << Complex(-x(2), x(3)), Complex(-x(0), -x(1)), x(4) - s * r, 0.0;
  v.col(1) << Complex(-x(0), x(1)), Complex(x(2), x(3)), 0.0, x(4) - s * r;
  Frame dv;
  dv.col(0) << Complex(-dp(2), dp(3)), Complex(-dp(0), -dp(1)), dp(4) - s * dr, 0.0;
  dv.col(1) << Complex(-dp(0), dp(1)), Complex(dp(2), dp(3)), 0.0, dp(4) - s * dr;
  return dv / n - v * (dn / n2);
}

AnalyticEigensystem eigensystem_analytic(const ParamPoint& p) {
  AnalyticEigensystem es;
  es.vectors.leftCols<2>() = analytic_frame(p, Band::Minus);
  es.vectors.rightCols<2>() = analytic_frame(p, Band::Plus);
  const double r = p.norm();
  es.energies << -r, -r, r, r;
  return es;
}

Projectors projectors(const ParamPoint& p) {
  require_gap(p);
  const Mat4 hhat = hamiltonian(p) / p.norm();
  const Mat4 id = Mat4::Identity();
  return {0.5 * (id + hhat), 0.5 * (id - hhat)};
}

double thermal_weight_chi(double r, double temperature) {
  return 1.0 - 1.0 / std::cosh(r / temperature);
}

Mat4 thermal_rho(const ParamPoint& p, double temperature) {
  if (!(temperature > 0.0)) throw Error(Errc::NonpositiveTemperature, "T must be positive");
  const double r = p.norm();
  if (!std::isfinite(r)) throw Error(Errc::InvalidArgument, "non-finite R");
  const Mat4 id = Mat4::Identity();
  if (r == 0.0) return 0.25 * id;
  return 0.25 * (id - std::tanh(r / temperature) / r * hamiltonian(p));
}

Mat4 thermal_rho_derivative(const ParamPoint& p, const Vec5& dp, double temperature) {
  if (!(temperature > 0.0)) throw Error(Errc::NonpositiveTemperature, "T must be positive");
  require_gap(p);
  const double r = p.norm();
  const Vec5 rhat = p.r / r;
  const double dr = rhat.dot(dp);
  const Vec5 drhat = (dp - rhat * dr) / r;
  const double th = std::tanh(r / temperature);
  const double sech = 1.0 / std::cosh(r / temperature);
  const Vec5 dcoef = sech * sech * (dr / temperature) * rhat + th * drhat;
  return -0.25 * hamiltonian(ParamPoint(dcoef));
}

ThermalState thermal_density(const ParamPoint& p, double temperature) {
  if (!(temperature > 0.0)) throw Error(Errc::NonpositiveTemperature, "T must be positive");
  require_gap(p);
  ThermalState s;
  const double x = p.norm() / temperature;
  s.temperature = temperature;
  s.rho = thermal_rho(p, temperature);
  // e^{-/+x} / (4 cosh x) without overflow.
  s.lambda_plus = 0.5 / (1.0 + std::exp(2.0 * x));
  s.lambda_minus = 0.5 / (1.0 + std::exp(-2.0 * x));
  s.partition = 4.0 * std::cosh(x);
  s.proj = projectors(p);
  return s;
}

ParamPoint sphere_point(double theta, double phi, double radius) {
  const double planar = radius / std::numbers::sqrt2 * std::sin(theta);
  Vec5 v;
  v << planar * std::cos(phi), planar * std::sin(phi), planar * std::cos(phi),
      planar * std::sin(phi), radius * std::cos(theta);
  return ParamPoint(v);
}

ParamPoint tb4d_point(const Eigen::Vector4d& k, double m) {
  Vec5 v;
  v << std::sin(k(0)), std::sin(k(1)), std::sin(k(2)), std::sin(k(3)),
      m + k.array().cos().sum();
  return ParamPoint(v);
}

LoopPath make_loop(LoopFamily family, const LoopParams& params, int segments) {
  if (segments < kMinLoopSegments)
    throw Error(Errc::TooFewSegments, "loops need at least 8 segments");
  if (family == LoopFamily::Explicit)
    throw Error(Errc::InvalidArgument, "explicit loops are built from samples");

  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double dangle = two_pi / segments;
  LoopPath loop;
  loop.family = family;
  loop.radius = params.radius;
  loop.mass = params.m;

  auto point = [&](double angle) {
    if (family == LoopFamily::Equator) return sphere_point(std::numbers::pi / 2, angle, params.radius);
    return tb4d_point(Eigen::Vector4d(angle, 0, 0, 0), params.m);
  };
  // dR/d(angle), exact.
  auto tangent = [&](double angle) {
    Vec5 d;
    if (family == LoopFamily::Equator) {
      const double a = params.radius / std::numbers::sqrt2;
      d << -a * std::sin(angle), a * std::cos(angle), -a * std::sin(angle), a * std::cos(angle), 0.0;
    } else {
      d << std::cos(angle), 0, 0, 0, -std::sin(angle);
    }
    return d;
  };

  if (family == LoopFamily::Equator && !(params.radius > 0.0))
    throw Error(Errc::InvalidArgument, "equator radius must be positive");

  for (int k = 0; k <= segments; ++k) {
    const double angle = k == segments ? two_pi : k * dangle;
    loop.samples.push_back(k == segments ? loop.samples.front() : point(angle));
    loop.t.push_back(static_cast<double>(k) / segments);
    Eigen::VectorXd c;
    if (family == LoopFamily::Equator) {
      c.resize(2);
      c << std::numbers::pi / 2, angle;
    } else {
      c.resize(5);
      c << angle, 0, 0, 0, params.m;
    }
    loop.coords.push_back(c);
  }
  for (int k = 0; k < segments; ++k) {
    const double mid = (k + 0.5) * dangle;
    loop.segments.push_back({point(mid), tangent(mid) * dangle});
  }
  return loop;
}

LoopPath make_explicit_loop(std::vector<ParamPoint> samples) {
  if (samples.size() < static_cast<std::size_t>(kMinLoopSegments) + 1)
    throw Error(Errc::TooFewSegments, "explicit loops need at least 9 samples");
  if (!(samples.front() == samples.back()))
    throw Error(Errc::OpenPath, "first and last samples differ");
  for (const auto& s : samples)
    if (!s.r.allFinite()) throw Error(Errc::InvalidArgument, "non-finite loop sample");

  LoopPath loop;
  loop.family = LoopFamily::Explicit;
  const std::size_t n = samples.size() - 1;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const Vec5& a = samples[k].r;
    const Vec5& b = samples[k + 1].r;
    loop.segments.push_back({ParamPoint(0.5 * (a + b)), b - a});
  }
  for (std::size_t k = 0; k <= n; ++k) loop.t.push_back(static_cast<double>(k) / static_cast<double>(n));
  loop.samples = std::move(samples);
  return loop;
}

std::vector<ParamPoint> read_loop_samples(std::istream& in) {
  std::vector<ParamPoint> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    Vec5 v;
    for (int i = 0; i < 5; ++i) {
      if (!(fields >> v(i)))
        throw Error(Errc::Parse, "loop file line " + std::to_string(line_no) + ": expected 5 reals");
    }
    std::string extra;
    if (fields >> extra)
      throw Error(Errc::Parse, "loop file line " + std::to_string(line_no) + ": trailing data");
    samples.emplace_back(v);
  }
  return samples;
}

LoopPath load_explicit_loop(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open loop file " + path);
  return make_explicit_loop(read_loop_samples(in));
}

}  // namespace geophase
