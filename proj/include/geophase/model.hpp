#pragma once

// Four-level Hamiltonian H = sum_i R_i Gamma^i with two doubly degenerate
// levels at +/-|R|, its thermal states, and closed loops in R-space.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "geophase/types.hpp"

namespace geophase {

/// A point R = (R1, ..., R5) in parameter space (energy units, hbar = k_B = 1).
struct ParamPoint {
  Vec5 r = Vec5::Zero();

  ParamPoint() = default;
  explicit ParamPoint(const Vec5& v) : r(v) {}

  double norm() const { return r.norm(); }
  bool operator==(const ParamPoint& other) const { return r == other.r; }
};

struct GammaSet {
  std::array<Mat4, 5> gamma;

  /// Gamma^{ab} = (i/2)[Gamma^a, Gamma^b], zero-based indices.
  Mat4 commutator(int a, int b) const;
};

/// Gamma^{1,2,3} = sigma1 (x) sigma_{1,2,3}, Gamma^4 = sigma2 (x) 1, Gamma^5 = sigma3 (x) 1.
const GammaSet& gamma_matrices();

Mat4 hamiltonian(const ParamPoint& p);

/// Ground (energy -R, states c,d) and excited (+R, states a,b) subspaces.
enum class Band { Minus, Plus };

/// Throws GapClosure when |R| <= kGapFloor.
void require_gap(const ParamPoint& p);
/// Throws GaugePole when the closed-form eigenvectors of `band` are singular at p.
void require_off_pole(const ParamPoint& p, Band band);
bool near_pole(const ParamPoint& p, Band band);

/// Closed-form orthonormal eigenvectors of one band: (psi_a, psi_b) for Plus,
/// (psi_c, psi_d) for Minus.
Frame analytic_frame(const ParamPoint& p, Band band);
/// Exact directional derivative of analytic_frame along dp.
Frame analytic_frame_derivative(const ParamPoint& p, const Vec5& dp, Band band);

struct AnalyticEigensystem {
  Mat4 vectors;              // columns psi_c, psi_d, psi_a, psi_b
  Eigen::Vector4d energies;  // -R, -R, +R, +R
};
AnalyticEigensystem eigensystem_analytic(const ParamPoint& p);

struct Projectors {
  Mat4 plus;
  Mat4 minus;
};
/// P_+/- = (1 +/- R_hat . Gamma) / 2.
Projectors projectors(const ParamPoint& p);

struct ThermalState {
  Mat4 rho;
  double temperature = 0.0;
  double lambda_plus = 0.0;   // weight of each excited state
  double lambda_minus = 0.0;  // weight of each ground state
  double partition = 0.0;     // Z = 4 cosh(R/T); +inf once R/T exceeds ~710
  Projectors proj;
};

/// rho = (1 - tanh(R/T) R_hat . Gamma) / 4; defined at R = 0 as 1/4.
Mat4 thermal_rho(const ParamPoint& p, double temperature);
/// Directional derivative of thermal_rho along dp at fixed temperature.
Mat4 thermal_rho_derivative(const ParamPoint& p, const Vec5& dp, double temperature);
ThermalState thermal_density(const ParamPoint& p, double temperature);

/// chi = 1 - sech(R/T).
double thermal_weight_chi(double r, double temperature);

ParamPoint sphere_point(double theta, double phi, double radius);
/// R = (sin kx, sin ky, sin kz, sin ku, m + sum cos k).
ParamPoint tb4d_point(const Eigen::Vector4d& k, double m);

enum class LoopFamily { Equator, Tb4dKx, Explicit };

/// One path-ordering step: the point where the connection is evaluated and
/// the parameter-space displacement it is contracted with.
struct LoopSegment {
  ParamPoint midpoint;
  Vec5 step = Vec5::Zero();
};

struct LoopPath {
  LoopFamily family = LoopFamily::Explicit;
  std::vector<ParamPoint> samples;        // N + 1, samples.front() == samples.back()
  std::vector<double> t;                  // k / N
  std::vector<Eigen::VectorXd> coords;    // (theta, phi) or (kx, ky, kz, ku, m); empty for explicit
  std::vector<LoopSegment> segments;      // N
  double radius = 0.0;                    // equator
  double mass = 0.0;                      // tb4d

  int steps() const { return static_cast<int>(segments.size()); }
  const ParamPoint& start() const { return samples.front(); }
};

struct LoopParams {
  double radius = 1.0;  // equator: |R|
  double m = -3.0;      // tb4d: mass term
};

inline constexpr int kMinLoopSegments = 8;

/// Uniformly sampled family loop: phi in [0, 2pi] at theta = pi/2, or kx in
/// [0, 2pi] with ky = kz = ku = 0.
LoopPath make_loop(LoopFamily family, const LoopParams& params, int segments);
/// Loop through the given samples, which must close bitwise.
LoopPath make_explicit_loop(std::vector<ParamPoint> samples);

/// Plain text: one sample per line, five whitespace-separated reals. Blank
/// lines and lines starting with '#' are skipped.
std::vector<ParamPoint> read_loop_samples(std::istream& in);
LoopPath load_explicit_loop(const std::string& path);

}  // namespace geophase
