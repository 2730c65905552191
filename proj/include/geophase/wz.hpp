#pragma once

// Wilczek-Zee connection and holonomy of the two degenerate subspaces, and
// the scalar WZ phase of the ground subspace.
//
// A_{ij} = <psi_i|d psi_j> (anti-Hermitian; no factor i), holonomy
// P exp(-oint A). Frames are 4x2 with the subspace basis in the columns.

#include <span>
#include <vector>

#include "geophase/model.hpp"
#include "geophase/phase.hpp"

namespace geophase {

struct WZConnectionSample {
  Mat2 minus = Mat2::Zero();  // basis (c, d)
  Mat2 plus = Mat2::Zero();   // basis (a, b)

  /// Block-diagonal 4x4 form in the (c, d, a, b) basis.
  Mat4 assembled() const {
    Mat4 out = Mat4::Zero();
    out.topLeftCorner<2, 2>() = minus;
    out.bottomRightCorner<2, 2>() = plus;
    return out;
  }
  const Mat2& block(Band band) const { return band == Band::Minus ? minus : plus; }
};

/// Ground and excited frames at one parameter point.
struct BandFrames {
  Frame minus;
  Frame plus;

  const Frame& frame(Band band) const { return band == Band::Minus ? minus : plus; }
};

/// How a holonomy was obtained. AnalyticGauge integrates the closed-form
/// connection; Transported aligns numerically diagonalized frames by polar
/// decomposition and folds the closing unitary into the result.
enum class WZRoute { AnalyticGauge, Transported };

struct WZHolonomy {
  Mat2 minus = Mat2::Identity();
  Mat2 plus = Mat2::Identity();
  int steps = 0;
  WZRoute route_minus = WZRoute::AnalyticGauge;
  WZRoute route_plus = WZRoute::AnalyticGauge;

  const Mat2& block(Band band) const { return band == Band::Minus ? minus : plus; }
};

using ScalarWZResult = PhaseResult;

/// Closed-form elements in the gauge of analytic_frame. Throws GapClosure or
/// GaugePole.
WZConnectionSample wz_connection_analytic(const ParamPoint& p, const Vec5& dp);

/// One band of the closed-form connection.
Mat2 wz_connection_analytic(const ParamPoint& p, const Vec5& dp, Band band);

/// Midpoint overlap 1/2 (F + F')^dagger (F' - F), antisymmetrized. Throws
/// GaugeDiscontinuity when the frames are not aligned (overlap singular value
/// below 1/2).
Mat2 frame_connection(const Frame& prev, const Frame& next);
WZConnectionSample wz_connection_numeric(const BandFrames& prev, const BandFrames& next);

/// Eigenframes of H(p) from herm_eig: lowest two columns for Minus.
BandFrames numeric_frames(const ParamPoint& p);

/// Rotate `next` by the unitary factor of next^dagger prev, which makes the
/// overlap prev^dagger next Hermitian positive definite.
Frame align_frame(const Frame& prev, const Frame& next);

/// Frames of one band along the loop, each aligned to its predecessor.
std::vector<Frame> transported_frames(const LoopPath& loop, Band band);

/// F_0^dagger F_N for transported frames, which folds in the closing rotation.
Mat2 frame_holonomy(std::span<const Frame> frames);

/// True when the analytic frame is defined at every sample and adjacent
/// analytic frames overlap near the identity, i.e. the closed-form gauge is
/// single valued along the loop.
bool analytic_gauge_continuous(const LoopPath& loop, Band band);

/// Path-ordered midpoint product of unitary_exp(-A) with the closed-form
/// connection. Only gauge invariant when analytic_gauge_continuous holds.
Mat2 wz_holonomy_analytic(const LoopPath& loop, Band band);
Mat2 wz_holonomy_transported(const LoopPath& loop, Band band);

/// The closed-form route where its gauge is continuous, otherwise transport.
Mat2 wz_holonomy(const LoopPath& loop, Band band, WZRoute* route = nullptr);
WZHolonomy wz_holonomy(const LoopPath& loop);

/// arg Tr[(1/D) P U] for a D x D holonomy block in the frame basis.
ScalarWZResult scalar_wz_phase(const Eigen::MatrixXcd& block);
ScalarWZResult scalar_wz_phase(const LoopPath& loop);

/// arg <W(0)|W(tau)> with W = F~ / sqrt(D) the transported ground frame.
ScalarWZResult scalar_wz_phase_purified(const LoopPath& loop);

}  // namespace geophase
