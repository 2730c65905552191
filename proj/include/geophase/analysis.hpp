#pragma once

// Critical temperatures, (m, T) phase diagrams, dome fits, winding numbers,
// the zero-temperature connection decomposition, and the comparison of the
// low-temperature Uhlmann phase with the scalar WZ phase.

#include <optional>
#include <span>
#include <vector>

#include "geophase/error.hpp"
#include "geophase/model.hpp"
#include "geophase/phase.hpp"
#include "geophase/uhlmann.hpp"
#include "geophase/wz.hpp"

namespace geophase {

enum class CriticalModel { Equator, Tb4d };

/// Sign-carrying scalar whose zero is the phase jump: cos(pi chi) on the
/// equator (param = R), cos I(m, T) on the kx loop (param = m).
double critical_indicator(CriticalModel model, double param, double temperature, int quad_points = 64);

/// Bisects the indicator's sign change inside [t_lo, t_hi] to |dT| < tol.
/// Without a sign change at the ends, scans 64 log-spaced points for one;
/// returns nullopt when there is none.
std::optional<double> critical_temperature(CriticalModel model, double param, double t_lo, double t_hi,
                                           double tol = 1e-6, int quad_points = 64);

/// Closed form R / ln(2 + sqrt 3).
double equator_critical_temperature(double radius);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// n points from lo to hi inclusive, linear or logarithmic.
std::vector<double> make_axis(const Range& range, int n, bool log_spacing);

enum class CellStatus { Defined, NearCritical, Error };

struct PhaseCell {
  double phase = 0.0;
  double magnitude = 0.0;
  double integral = 0.0;  // I(m, T)
  CellStatus status = CellStatus::Error;
  Errc error = Errc::InvalidArgument;
};

struct PhaseDiagramGrid {
  std::vector<double> m;
  std::vector<double> T;
  std::vector<PhaseCell> cells;  // row-major, cells[i * T.size() + j] for (m[i], T[j])
  int quad_points = 64;

  const PhaseCell& at(std::size_t i, std::size_t j) const { return cells[i * T.size() + j]; }
};

struct DiagramOptions {
  bool log_T = false;
  unsigned threads = 0;  // 0: hardware parallelism
  int quad_points = 64;
};

/// tb4d_phase_analytic on every (m, T) cell. Per-cell failures (gap closing
/// at |m+3| = 1) are recorded in the cell.
PhaseDiagramGrid phase_diagram(const Range& m_range, int m_steps, const Range& t_range, int t_steps,
                               const DiagramOptions& options = {});

struct DomePoint {
  double m = 0.0;
  double t_c = 0.0;
};

struct DomeFit {
  double amplitude = 0.0;  // A
  double exponent = 0.0;   // p
  double residual = 0.0;   // RMS of A u^p - T_c
  std::vector<DomePoint> boundary;
};

/// Fits T_c(m) = A [1 - (m+3)^2]^p over columns with |m+3| <= 0.95. Each
/// column's boundary is refined by 20 bisection steps between its last pi
/// cell and the following 0 cell. Throws EmptyDome without any pi cells.
DomeFit dome_fit(const PhaseDiagramGrid& grid);

struct WindingResult {
  int kappa = 0;
  double raw = 0.0;       // (1/2 pi) sum arg eig(D_{k+1} D_k^dagger)
  double residual = 0.0;  // |raw - kappa|
};

/// kappa = (1/2 pi i) sum_k Tr log(D_{k+1} D_k^dagger). Throws NotClosed,
/// StepTooLarge (||D_{k+1} D_k^dagger - 1||_F >= 0.5) or NoConvergence when
/// the sum is not within 0.1 of an integer.
WindingResult winding_number(std::span<const Eigen::MatrixXcd> samples);

/// sum_{i, n, m} <psi_n|d psi_m> |psi_n><psi_m| within each subspace, as an
/// operator on the original basis.
Mat4 wz_connection_operator(const ParamPoint& p, const Vec5& dp);
/// sum_j |d psi_j><psi_j|, which is dD D^dagger for a unitary family.
Mat4 frame_rotation_generator(const ParamPoint& p, const Vec5& dp);
/// Zero-temperature limit of the Uhlmann connection, A_WZ - sum |d psi><psi|.
Mat4 zero_t_connection(const ParamPoint& p, const Vec5& dp);
Holonomy zero_t_holonomy(const LoopPath& loop);
/// ||[A_WZ, dD D^dagger]||_F at one point.
double wz_commutator_norm(const ParamPoint& p, const Vec5& dp);

/// |R| constant along the samples within rel_tol.
bool is_unitary_family(const LoopPath& loop, double rel_tol = 1e-9);

/// D_k = V_k V_0^dagger from single-valued eigenbases V_k (the closed-form
/// gauge when it is continuous, otherwise transported frames with their
/// holonomy unwound).
std::vector<Eigen::MatrixXcd> unitary_family(const LoopPath& loop);

/// Largest |R| over the samples.
double loop_energy_scale(const LoopPath& loop);
/// scale * {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}.
std::vector<double> default_ladder(double scale);

enum class Verdict { Match, Mismatch, Undecided };

struct CorrespondenceReport {
  LoopFamily family = LoopFamily::Explicit;
  int steps = 0;
  double radius = 0.0;
  double mass = 0.0;
  std::vector<double> ladder;
  std::vector<PhaseResult> theta_u;
  double theta_u_limit = 0.0;
  bool ladder_converged = false;
  PhaseResult theta_wz;
  WZRoute wz_route = WZRoute::AnalyticGauge;
  /// Scalar phase from the closed-form connection even where its gauge is
  /// singular on the loop; diagnostic only.
  std::optional<double> theta_wz_analytic_gauge;
  Verdict verdict = Verdict::Undecided;
  bool unitary_family = false;
  std::optional<int> kappa;
  double kappa_residual = 0.0;
  std::optional<double> commutator_norm;
};

CorrespondenceReport correspondence(const LoopPath& loop, const std::vector<double>& ladder,
                                    unsigned threads = 0);

}  // namespace geophase
