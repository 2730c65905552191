#include "geophase/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "geophase/linalg.hpp"
#include "geophase/parallel.hpp"

namespace geophase {

double critical_indicator(CriticalModel model, double param, double temperature, int quad_points) {
  if (model == CriticalModel::Equator)
    return std::cos(std::numbers::pi * thermal_weight_chi(param, temperature));
  return std::cos(tb4d_I(param, temperature, quad_points));
}

std::optional<double> critical_temperature(CriticalModel model, double param, double t_lo, double t_hi,
                                           double tol, int quad_points) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw Error(Errc::InvalidArgument, "bracket must satisfy 0 < T_lo < T_hi");
  if (!(tol > 0.0)) throw Error(Errc::InvalidArgument, "tolerance must be positive");
  auto f = [&](double t) { return critical_indicator(model, param, t, quad_points); };
  auto opposite = [](double x, double y) { return (x < 0.0) != (y < 0.0); };

  double a = t_lo, b = t_hi;
  double fa = f(a), fb = f(b);
  if (!opposite(fa, fb)) {
    constexpr int kScan = 64;
    const double ratio = std::log(t_hi / t_lo) / (kScan - 1);
    bool found = false;
    double prev_t = t_lo, prev_f = fa;
    for (int i = 1; i < kScan && !found; ++i) {
      const double t = i == kScan - 1 ? t_hi : t_lo * std::exp(ratio * i);
      const double ft = f(t);
      if (opposite(prev_f, ft)) {
        a = prev_t, fa = prev_f, b = t, fb = ft;
        found = true;
      }
      prev_t = t, prev_f = ft;
    }
    if (!found) return std::nullopt;
  }
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (opposite(fa, fm)) {
      b = mid;
    } else {
      a = mid;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

double equator_critical_temperature(double radius) {
  return radius / std::log(2.0 + std::sqrt(3.0));
}

std::vector<double> make_axis(const Range& range, int n, bool log_spacing) {
  if (n < 2) throw Error(Errc::InvalidArgument, "an axis needs at least 2 points");
  if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || !(range.hi > range.lo))
    throw Error(Errc::InvalidArgument, "range must have positive length");
  if (log_spacing && !(range.lo > 0.0)) throw Error(Errc::InvalidArgument, "log axis needs a positive start");
  std::vector<double> axis(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / (n - 1);
    axis[static_cast<std::size_t>(i)] = log_spacing ? range.lo * std::pow(range.hi / range.lo, f)
                                                    : range.lo + (range.hi - range.lo) * i / (n - 1);
  }
  axis.front() = range.lo;
  axis.back() = range.hi;
  return axis;
}

PhaseDiagramGrid phase_diagram(const Range& m_range, int m_steps, const Range& t_range, int t_steps,
                               const DiagramOptions& options) {
  if (!(t_range.lo > 0.0)) throw Error(Errc::NonpositiveTemperature, "temperature range must be positive");
  PhaseDiagramGrid grid;
  grid.m = make_axis(m_range, m_steps, false);
  grid.T = make_axis(t_range, t_steps, options.log_T);
  grid.quad_points = options.quad_points;
  grid.cells.resize(grid.m.size() * grid.T.size());

  const std::size_t nt = grid.T.size();
  parallel_for(grid.cells.size(), options.threads, [&](std::size_t idx) {
    PhaseCell& cell = grid.cells[idx];
    try {
      cell.integral = tb4d_I(grid.m[idx / nt], grid.T[idx % nt], options.quad_points);
      const PhaseResult r = make_phase(Complex(std::cos(cell.integral), 0.0));
      cell.phase = r.phase;
      cell.magnitude = r.magnitude;
      cell.status = r.defined() ? CellStatus::Defined : CellStatus::NearCritical;
    } catch (const Error& e) {
      cell.status = CellStatus::Error;
      cell.error = e.code();
    }
  });
  return grid;
}

namespace {

bool is_pi(const PhaseCell& c) { return c.status == CellStatus::Defined && c.phase > std::numbers::pi / 2; }
bool is_zero(const PhaseCell& c) { return c.status == CellStatus::Defined && std::abs(c.phase) < std::numbers::pi / 2; }

}  // namespace

DomeFit dome_fit(const PhaseDiagramGrid& grid) {
  if (std::none_of(grid.cells.begin(), grid.cells.end(), is_pi))
    throw Error(Errc::EmptyDome, "no pi cells in the grid");

  DomeFit fit;
  const std::size_t nt = grid.T.size();
  for (std::size_t i = 0; i < grid.m.size(); ++i) {
    const double m = grid.m[i];
    if (std::abs(m + 3.0) > 0.95) continue;
    std::size_t last = nt;
    for (std::size_t j = 0; j < nt; ++j)
      if (is_pi(grid.at(i, j))) last = j;
    if (last == nt || last + 1 >= nt || !is_zero(grid.at(i, last + 1))) continue;

    double a = grid.T[last], b = grid.T[last + 1];
    for (int step = 0; step < 20; ++step) {
      const double mid = 0.5 * (a + b);
      if (std::cos(tb4d_I(m, mid, grid.quad_points)) < 0.0)
        a = mid;
      else
        b = mid;
    }
    // R0 = R(m = -3) = 1 on the kx loop, so T_c is already in units of R0.
    fit.boundary.push_back({m, 0.5 * (a + b)});
  }
  if (fit.boundary.size() < 2) throw Error(Errc::EmptyDome, "fewer than two dome boundary points");

  const std::size_t n = fit.boundary.size();
  Eigen::VectorXd u(n), y(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = fit.boundary[k].m + 3.0;
    u(k) = 1.0 - x * x;
    y(k) = fit.boundary[k].t_c;
  }

  // Start from the straight-line fit of log T_c against log u.
  const Eigen::VectorXd lu = u.array().log();
  const Eigen::VectorXd ly = y.array().log();
  const double mu = lu.mean(), my = ly.mean();
  const double var = (lu.array() - mu).square().sum();
  if (!(var > 0.0)) throw Error(Errc::InvalidArgument, "dome boundary needs distinct m values");
  double p = ((lu.array() - mu) * (ly.array() - my)).sum() / var;
  double amp = std::exp(my - p * mu);

  // Gauss-Newton on the untransformed residuals.
  for (int iter = 0; iter < 100; ++iter) {
    const Eigen::ArrayXd up = u.array().pow(p);
    const Eigen::VectorXd r = (amp * up).matrix() - y;
    Eigen::MatrixXd jac(n, 2);
    jac.col(0) = up.matrix();
    jac.col(1) = (amp * up * lu.array()).matrix();
    const Eigen::Vector2d delta = (jac.transpose() * jac).ldlt().solve(-jac.transpose() * r);
    amp += delta(0);
    p += delta(1);
    if (delta.norm() < 1e-14 * (1.0 + std::abs(amp) + std::abs(p))) break;
  }
  fit.amplitude = amp;
  fit.exponent = p;
  fit.residual = std::sqrt(((amp * u.array().pow(p)).matrix() - y).squaredNorm() / static_cast<double>(n));
  return fit;
}

WindingResult winding_number(std::span<const Eigen::MatrixXcd> samples) {
  if (samples.size() < 2) throw Error(Errc::InvalidArgument, "winding number needs a closed sequence");
  const Eigen::Index dim = samples.front().rows();
  for (const auto& d : samples)
    if (d.rows() != dim || d.cols() != dim) throw Error(Errc::InvalidArgument, "samples must share one square shape");
  if ((samples.back() - samples.front()).cwiseAbs().maxCoeff() > 1e-9)
    throw Error(Errc::NotClosed, "first and last samples differ");

  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const Eigen::MatrixXcd step = samples[k + 1] * samples[k].adjoint();
    if ((step - id).norm() >= 0.5) throw Error(Errc::StepTooLarge, "increment too large for a principal log");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(step, false);
    if (solver.info() != Eigen::Success) throw Error(Errc::NoConvergence, "increment eigenvalues failed");
    for (Eigen::Index i = 0; i < dim; ++i) total += std::arg(solver.eigenvalues()(i));
  }
  WindingResult w;
  w.raw = total / (2.0 * std::numbers::pi);
  w.kappa = static_cast<int>(std::lround(w.raw));
  w.residual = std::abs(w.raw - w.kappa);
  if (w.residual >= 0.1) throw Error(Errc::NoConvergence, "winding sum is not close to an integer");
  return w;
}

namespace {

struct FrameData {
  Mat4 v;   // columns c, d, a, b
  Mat4 dv;
};

FrameData frame_data(const ParamPoint& p, const Vec5& dp) {
  FrameData f;
  f.v.leftCols<2>() = analytic_frame(p, Band::Minus);
  f.v.rightCols<2>() = analytic_frame(p, Band::Plus);
  f.dv.leftCols<2>() = analytic_frame_derivative(p, dp, Band::Minus);
  f.dv.rightCols<2>() = analytic_frame_derivative(p, dp, Band::Plus);
  return f;
}

// Principal logarithm of a unitary through its Schur form, which is diagonal
// for normal matrices.
Mat2 unitary_log(const Mat2& u) {
  Eigen::ComplexSchur<Mat2> schur(u);
  Mat2 d = Mat2::Zero();
  for (int i = 0; i < 2; ++i) d(i, i) = kI * principal_arg(schur.matrixT()(i, i));
  const Mat2 q = schur.matrixU();
  const Mat2 l = q * d * q.adjoint();
  return 0.5 * (l - l.adjoint());
}

}  // namespace

Mat4 wz_connection_operator(const ParamPoint& p, const Vec5& dp) {
  const Mat4 v = eigensystem_analytic(p).vectors;
  return v * wz_connection_analytic(p, dp).assembled() * v.adjoint();
}

Mat4 frame_rotation_generator(const ParamPoint& p, const Vec5& dp) {
  const FrameData f = frame_data(p, dp);
  return f.dv * f.v.adjoint();
}

Mat4 zero_t_connection(const ParamPoint& p, const Vec5& dp) {
  return wz_connection_operator(p, dp) - frame_rotation_generator(p, dp);
}

Holonomy zero_t_holonomy(const LoopPath& loop) {
  return path_ordered(loop, [](const LoopSegment& s) { return zero_t_connection(s.midpoint, s.step); });
}

double wz_commutator_norm(const ParamPoint& p, const Vec5& dp) {
  const Mat4 a = wz_connection_operator(p, dp);
  const Mat4 g = frame_rotation_generator(p, dp);
  return (a * g - g * a).norm();
}

bool is_unitary_family(const LoopPath& loop, double rel_tol) {
  double lo = loop.samples.front().norm(), hi = lo;
  for (const auto& s : loop.samples) {
    lo = std::min(lo, s.norm());
    hi = std::max(hi, s.norm());
  }
  return hi - lo <= rel_tol * hi;
}

std::vector<Eigen::MatrixXcd> unitary_family(const LoopPath& loop) {
  const std::size_t count = loop.samples.size();
  std::vector<Mat4> bases(count);
  if (analytic_gauge_continuous(loop, Band::Minus) && analytic_gauge_continuous(loop, Band::Plus)) {
    for (std::size_t k = 0; k < count; ++k) bases[k] = eigensystem_analytic(loop.samples[k]).vectors;
  } else {
    for (Band band : {Band::Minus, Band::Plus}) {
      const auto frames = transported_frames(loop, band);
      const Mat2 log_u = unitary_log(frame_holonomy(frames));
      const int col = band == Band::Minus ? 0 : 2;
      for (std::size_t k = 0; k < count; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(count - 1);
        bases[k].middleCols<2>(col) = frames[k] * unitary_exp(Mat2(-t * log_u));
      }
    }
    bases.back() = bases.front();
  }
  std::vector<Eigen::MatrixXcd> family;
  family.reserve(count);
  for (const auto& v : bases) family.emplace_back(v * bases.front().adjoint());
  return family;
}

double loop_energy_scale(const LoopPath& loop) {
  double scale = 0.0;
  for (const auto& s : loop.samples) scale = std::max(scale, s.norm());
  return scale;
}

std::vector<double> default_ladder(double scale) {
  return {1e-1 * scale, 3e-2 * scale, 1e-2 * scale, 3e-3 * scale, 1e-3 * scale};
}

CorrespondenceReport correspondence(const LoopPath& loop, const std::vector<double>& ladder, unsigned threads) {
  if (ladder.size() < 4) throw Error(Errc::InvalidArgument, "temperature ladder needs at least 4 rungs");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0)) throw Error(Errc::NonpositiveTemperature, "ladder temperatures must be positive");
    if (i > 0 && !(ladder[i] < ladder[i - 1])) throw Error(Errc::InvalidArgument, "ladder must be descending");
  }

  CorrespondenceReport report;
  report.family = loop.family;
  report.steps = loop.steps();
  report.radius = loop.radius;
  report.mass = loop.mass;
  report.ladder = ladder;
  report.theta_u.resize(ladder.size());
  parallel_for(ladder.size(), threads, [&](std::size_t i) { report.theta_u[i] = phase(loop, ladder[i]); });
  report.theta_u_limit = report.theta_u.back().phase;

  // Converged when every rung is defined and successive changes shrink to
  // below the verdict tolerance.
  constexpr double kVerdictTol = 1e-2;
  bool converged = std::all_of(report.theta_u.begin(), report.theta_u.end(),
                               [](const PhaseResult& r) { return r.defined(); });
  double previous_change = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; converged && i + 1 < ladder.size(); ++i) {
    const double change = angle_distance(report.theta_u[i].phase, report.theta_u[i + 1].phase);
    if (change > previous_change + 1e-12) converged = false;
    previous_change = change;
  }
  if (converged && ladder.size() > 1 && previous_change >= kVerdictTol) converged = false;
  report.ladder_converged = converged;

  const Mat2 u_minus = wz_holonomy(loop, Band::Minus, &report.wz_route);
  report.theta_wz = scalar_wz_phase(Eigen::MatrixXcd(u_minus));
  try {
    report.theta_wz_analytic_gauge = scalar_wz_phase(Eigen::MatrixXcd(wz_holonomy_analytic(loop, Band::Minus))).phase;
  } catch (const Error&) {
  }

  if (converged && report.theta_wz.defined())
    report.verdict = angle_distance(report.theta_u_limit, report.theta_wz.phase) < kVerdictTol ? Verdict::Match
                                                                                                : Verdict::Mismatch;

  report.unitary_family = is_unitary_family(loop);
  if (report.unitary_family) {
    try {
      const auto family = unitary_family(loop);
      const WindingResult w = winding_number(family);
      report.kappa = w.kappa;
      report.kappa_residual = w.residual;
    } catch (const Error&) {
    }
    try {
      // Per unit loop parameter t in [0, 1].
      const double scale = static_cast<double>(loop.steps());
      double worst = 0.0;
      for (const auto& s : loop.segments)
        worst = std::max(worst, wz_commutator_norm(s.midpoint, Vec5(s.step * scale)));
      report.commutator_norm = worst;
    } catch (const Error&) {
    }
  }
  return report;
}

}  // namespace geophase
