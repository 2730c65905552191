#pragma once

// Uhlmann connection, holonomy and phase of thermal states of the
// four-level model.
//
// Conventions: a connection sample is the anti-Hermitian 4x4 matrix of the
// connection 1-form contracted with a displacement dR. The holonomy is the
// ordered product exp(-A_{N-1}) ... exp(-A_0) with later steps on the left,
// and the phase is arg Tr[rho(0) U].

#include <functional>

#include "geophase/linalg.hpp"
#include "geophase/model.hpp"
#include "geophase/phase.hpp"

namespace geophase {

struct Holonomy {
  Mat4 matrix = Mat4::Identity();
  int steps = 0;
};

/// Gamma-form connection signature, so callers can substitute an alternative
/// (used by the self-test's mutation check).
using ConnectionFn = std::function<Mat4(const ParamPoint&, const Vec5&, double)>;

/// -sum_ij |i><i|[d sqrt(rho), sqrt(rho)]|j><j| / (lambda_i + lambda_j), with
/// d sqrt(rho) from the first divided difference <i|drho|j>/(sqrt(l_i)+sqrt(l_j)).
Mat4 connection_spectral(const EigenSystem<Mat4>& rho_eig, const Mat4& drho);

/// -(1 - sech(R/T)) / (2 R^2) * M(R, dR) with the closed-form 16 entries of M.
Mat4 connection_gamma(const ParamPoint& p, const Vec5& dp, double temperature);

/// The matrix M(R, dR) itself.
Mat4 gamma_form_matrix(const ParamPoint& p, const Vec5& dp);

/// -sum_{i != j} (sqrt(l_i) - sqrt(l_j))^2 / (l_i + l_j) |i><i|d j><j| given
/// eigenvectors of rho and their derivatives (column k of dvectors is d|k>).
Mat4 connection_alt(const EigenSystem<Mat4>& rho_eig, const Mat4& dvectors);

/// connection_alt with the closed-form eigenvectors and their exact
/// derivatives, ordered (a, b, c, d) so rho's eigenvalues ascend.
Mat4 connection_alt(const ParamPoint& p, const Vec5& dp, double temperature);

/// Eigensystem of the thermal state from the closed-form eigenvectors.
EigenSystem<Mat4> thermal_eigensystem_analytic(const ParamPoint& p, double temperature);

/// Central-difference derivative of an eigenbasis from its neighbours at
/// +/- h. Each degenerate cluster of `next`/`prev` is polar-aligned to
/// `center` first; throws GaugeDiscontinuity if an overlap is nearly singular.
Mat4 eigenbasis_derivative_fd(const EigenSystem<Mat4>& prev, const EigenSystem<Mat4>& center,
                              const EigenSystem<Mat4>& next, double h);

/// sqrt(rho) = sqrt(l+) P+ + sqrt(l-) P-.
Mat4 sqrt_density(const ThermalState& state);

/// Purified amplitude W = sqrt(rho) U; W W^dagger = rho for unitary U.
Mat4 purify(const ThermalState& state, const Mat4& phase_factor);

/// Path-ordered product of unitary_exp(-connection(segment)) over the loop.
Holonomy path_ordered(const LoopPath& loop, const std::function<Mat4(const LoopSegment&)>& connection);

Holonomy holonomy(const LoopPath& loop, double temperature);
Holonomy holonomy(const LoopPath& loop, double temperature, const ConnectionFn& connection);

/// arg Tr[rho(start) U] for a precomputed holonomy.
PhaseResult phase_of(const LoopPath& loop, double temperature, const Holonomy& u);
PhaseResult phase(const LoopPath& loop, double temperature);

/// exp(-i pi chi sigma3) (+) exp(i pi chi sigma1).
Mat4 equator_holonomy_closed_form(double temperature, double radius);
/// Tr[rho(0) U] = cos(pi chi) on the equator.
PhaseResult equator_phase_analytic(double temperature, double radius);

/// I(m, T) = int_0^{2pi} (sech(R/T) - 1)/(2R^2) [(m+3) cos kx + 1] dkx, composite
/// Simpson doubled from quad_points intervals until successive values agree
/// within 1e-9.
double tb4d_I(double m, double temperature, int quad_points = 64);
/// Rotation by I in the (1,4) and (2,3) planes.
Mat4 tb4d_holonomy_closed_form(double integral);
/// arg cos I(m, T).
PhaseResult tb4d_phase_analytic(double m, double temperature, int quad_points = 64);

/// Largest ||W^dagger dW - dW^dagger W||_F / dt along the discretized
/// horizontal lift W_k = sqrt(rho_k) U_k, dt = 1/N.
double transport_check(const LoopPath& loop, double temperature);

}  // namespace geophase
