#include "geophase/wz.hpp"

#include <cmath>

#include "geophase/error.hpp"
#include "geophase/linalg.hpp"

namespace geophase {

namespace {

// Smallest singular value of an overlap below which two frames are taken to
// be unrelated gauges rather than neighbours.
constexpr double kOverlapFloor = 0.5;

double smallest_singular(const Mat2& overlap) {
  const Mat2 gram = overlap.adjoint() * overlap;
  return std::sqrt(std::max(herm_eig(Mat2(0.5 * (gram + gram.adjoint()))).values(0), 0.0));
}

}  // namespace

Mat2 wz_connection_analytic(const ParamPoint& p, const Vec5& dp, Band band) {
  require_off_pole(p, band);
  const Vec5& x = p.r;
  const double r = p.norm();
  const double s = band == Band::Plus ? 1.0 : -1.0;
  const Complex den = 2.0 * kI * r * (r - s * x(4));
  const Complex diag = (x(1) * dp(0) - x(0) * dp(1) - x(3) * dp(2) + x(2) * dp(3)) / den;
  const Complex off = (x(0) * dp(3) - x(3) * dp(0) - x(1) * dp(2) + x(2) * dp(1) +
                       kI * (x(0) * dp(2) - x(2) * dp(0) + x(1) * dp(3) - x(3) * dp(1))) /
                      den;
  // The off-diagonal expression is <psi_2|d psi_1>; its partner follows from
  // anti-Hermiticity.
  Mat2 a;
  a << diag, -std::conj(off), off, -diag;
  return a;
}

WZConnectionSample wz_connection_analytic(const ParamPoint& p, const Vec5& dp) {
  return {wz_connection_analytic(p, dp, Band::Minus), wz_connection_analytic(p, dp, Band::Plus)};
}

Mat2 frame_connection(const Frame& prev, const Frame& next) {
  if (smallest_singular(prev.adjoint() * next) < kOverlapFloor)
    throw Error(Errc::GaugeDiscontinuity, "frames are not gauge aligned");
  const Mat2 x = 0.5 * (prev + next).adjoint() * (next - prev);
  return 0.5 * (x - x.adjoint());
}

WZConnectionSample wz_connection_numeric(const BandFrames& prev, const BandFrames& next) {
  return {frame_connection(prev.minus, next.minus), frame_connection(prev.plus, next.plus)};
}

BandFrames numeric_frames(const ParamPoint& p) {
  require_gap(p);
  const auto eig = herm_eig(hamiltonian(p));
  return {eig.vectors.leftCols<2>(), eig.vectors.rightCols<2>()};
}

Frame align_frame(const Frame& prev, const Frame& next) {
  const Mat2 overlap = next.adjoint() * prev;
  if (smallest_singular(overlap) < kOverlapFloor)
    throw Error(Errc::GaugeDiscontinuity, "subspace rotates too far between samples");
  return next * polar_unitary(overlap);
}

std::vector<Frame> transported_frames(const LoopPath& loop, Band band) {
  std::vector<Frame> frames;
  frames.reserve(loop.samples.size());
  for (const auto& sample : loop.samples) {
    const Frame raw = numeric_frames(sample).frame(band);
    frames.push_back(frames.empty() ? raw : align_frame(frames.back(), raw));
  }
  return frames;
}

Mat2 frame_holonomy(std::span<const Frame> frames) {
  if (frames.size() < 2) throw Error(Errc::InvalidArgument, "frame_holonomy needs a closed sequence");
  const Mat2 u = frames.front().adjoint() * frames.back();
  return polar_unitary(u);
}

bool analytic_gauge_continuous(const LoopPath& loop, Band band) {
  Frame previous;
  for (std::size_t k = 0; k < loop.samples.size(); ++k) {
    const ParamPoint& p = loop.samples[k];
    if (!(p.norm() > kGapFloor) || near_pole(p, band)) return false;
    const Frame current = analytic_frame(p, band);
    if (k > 0 && ((previous.adjoint() * current) - Mat2::Identity()).norm() >= kOverlapFloor) return false;
    previous = current;
  }
  return true;
}

Mat2 wz_holonomy_analytic(const LoopPath& loop, Band band) {
  Mat2 u = Mat2::Identity();
  for (const auto& seg : loop.segments)
    u = unitary_exp(Mat2(-wz_connection_analytic(seg.midpoint, seg.step, band))) * u;
  return u;
}

Mat2 wz_holonomy_transported(const LoopPath& loop, Band band) {
  const auto frames = transported_frames(loop, band);
  return frame_holonomy(frames);
}

Mat2 wz_holonomy(const LoopPath& loop, Band band, WZRoute* route) {
  const bool continuous = analytic_gauge_continuous(loop, band);
  if (route) *route = continuous ? WZRoute::AnalyticGauge : WZRoute::Transported;
  return continuous ? wz_holonomy_analytic(loop, band) : wz_holonomy_transported(loop, band);
}

WZHolonomy wz_holonomy(const LoopPath& loop) {
  WZHolonomy h;
  h.steps = loop.steps();
  h.minus = wz_holonomy(loop, Band::Minus, &h.route_minus);
  h.plus = wz_holonomy(loop, Band::Plus, &h.route_plus);
  return h;
}

ScalarWZResult scalar_wz_phase(const Eigen::MatrixXcd& block) {
  if (block.rows() != block.cols() || block.rows() == 0)
    throw Error(Errc::InvalidArgument, "holonomy block must be square");
  return make_phase(block.trace() / static_cast<double>(block.rows()));
}

ScalarWZResult scalar_wz_phase(const LoopPath& loop) {
  return scalar_wz_phase(Eigen::MatrixXcd(wz_holonomy(loop, Band::Minus)));
}

ScalarWZResult scalar_wz_phase_purified(const LoopPath& loop) {
  WZRoute route;
  const Mat2 u = wz_holonomy(loop, Band::Minus, &route);
  Frame start, end;
  if (route == WZRoute::AnalyticGauge) {
    start = analytic_frame(loop.samples.front(), Band::Minus);
    end = analytic_frame(loop.samples.back(), Band::Minus) * u;
  } else {
    const auto frames = transported_frames(loop, Band::Minus);
    start = frames.front();
    end = frames.back();
  }
  const double dim = static_cast<double>(start.cols());
  const Frame w0 = start / std::sqrt(dim);
  const Frame w1 = end / std::sqrt(dim);
  return make_phase((w0.adjoint() * w1).trace());
}

}  // namespace geophase
