#pragma once

#include <complex>

#include <Eigen/Dense>

namespace geophase {

using Complex = std::complex<double>;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
/// Four-component states of one doubly degenerate subspace, one per column.
using Frame = Eigen::Matrix<Complex, 4, 2>;

inline constexpr Complex kI{0.0, 1.0};

/// Smallest |R| at which eigenvectors, projectors and connections are defined.
inline constexpr double kGapFloor = 1e-8;
/// Relative distance of |R5| from |R| below which the analytic eigenvector
/// normalization sqrt(2R(R -/+ R5)) is considered singular.
inline constexpr double kPoleFloor = 1e-8;
/// Trace magnitude below which a phase is reported as near-critical.
inline constexpr double kMagFloor = 1e-9;

}  // namespace geophase
