#pragma once

// Dense Hermitian kernels for small complex matrices (dimension up to ~8).
// Everything is templated on the Eigen expression type so fixed-size
// matrices stay on the stack.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "geophase/error.hpp"

namespace geophase {

/// Eigenvalues closer than this (relative to the matrix norm) form one
/// degenerate cluster.
inline constexpr double kDegenerateClusterRel = 1e-10;
inline constexpr int kJacobiMaxSweeps = 100;

template <typename MatrixType>
struct EigenSystem {
  using Scalar = typename MatrixType::Scalar;
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  using RealVector = Eigen::Matrix<RealScalar, MatrixType::RowsAtCompileTime, 1>;

  RealVector values;    // ascending
  MatrixType vectors;   // eigenvectors as columns
};

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real hermiticity_defect(
    const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).norm();
}

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real anti_hermiticity_defect(
    const Eigen::MatrixBase<Derived>& m) {
  return (m + m.adjoint()).norm();
}

/// ||U^dagger U - 1||_F
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real unitarity_defect(
    const Eigen::MatrixBase<Derived>& u) {
  using Plain = typename Derived::PlainObject;
  return (u.adjoint() * u - Plain::Identity(u.rows(), u.cols())).norm();
}

namespace detail {

template <typename Matrix>
typename Eigen::NumTraits<typename Matrix::Scalar>::Real off_diagonal_norm(const Matrix& a) {
  using Real = typename Eigen::NumTraits<typename Matrix::Scalar>::Real;
  Real sum = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

// One complex Jacobi rotation J = diag(1, e^{-i alpha}) * [[c, s], [-s, c]]
// acting on the (p, q) plane; zeroes a(p, q) in J^dagger A J.
template <typename Matrix>
void jacobi_rotate(Matrix& a, Matrix& v, Eigen::Index p, Eigen::Index q) {
  using Scalar = typename Matrix::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;

  const Scalar apq = a(p, q);
  const Real b = std::abs(apq);
  if (b == Real(0)) return;
  const Scalar phase = apq / b;  // e^{i alpha}
  const Real theta = (std::real(a(q, q)) - std::real(a(p, p))) / (Real(2) * b);
  const Real t = (theta >= 0 ? Real(1) : Real(-1)) / (std::abs(theta) + std::sqrt(theta * theta + Real(1)));
  const Real c = Real(1) / std::sqrt(t * t + Real(1));
  const Real s = t * c;

  const Scalar jqp = -s * std::conj(phase);
  const Scalar jqq = c * std::conj(phase);

  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    const Scalar akp = a(k, p);
    const Scalar akq = a(k, q);
    a(k, p) = c * akp + jqp * akq;
    a(k, q) = s * akp + jqq * akq;
    const Scalar vkp = v(k, p);
    const Scalar vkq = v(k, q);
    v(k, p) = c * vkp + jqp * vkq;
    v(k, q) = s * vkp + jqq * vkq;
  }
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const Scalar apk = a(p, k);
    const Scalar aqk = a(q, k);
    a(p, k) = c * apk + std::conj(jqp) * aqk;
    a(q, k) = s * apk + std::conj(jqq) * aqk;
  }
  a(p, q) = Scalar(0);
  a(q, p) = Scalar(0);
  a(p, p) = Scalar(std::real(a(p, p)));
  a(q, q) = Scalar(std::real(a(q, q)));
}

}  // namespace detail

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix. Eigenvalues come
/// back ascending; inside a degenerate cluster the basis is orthonormal but
/// otherwise arbitrary.
template <typename Derived>
EigenSystem<typename Derived::PlainObject> herm_eig(const Eigen::MatrixBase<Derived>& input) {
  using Matrix = typename Derived::PlainObject;
  using Real = typename Eigen::NumTraits<typename Matrix::Scalar>::Real;

  const Eigen::Index n = input.rows();
  if (input.cols() != n) throw Error(Errc::InvalidArgument, "herm_eig: matrix is not square");
  Matrix a = input;
  if (!a.allFinite()) throw Error(Errc::InvalidArgument, "herm_eig: non-finite entry");
  const Real norm = a.norm();
  if (hermiticity_defect(a) > Real(1e-12) * norm)
    throw Error(Errc::NotHermitian, "herm_eig: input is not Hermitian");

  Matrix v = Matrix::Identity(n, n);
  const Real threshold = Real(1e-14) * norm;
  int sweep = 0;
  while (detail::off_diagonal_norm(a) > threshold) {
    if (++sweep > kJacobiMaxSweeps)
      throw Error(Errc::NoConvergence, "herm_eig: Jacobi sweep cap exceeded");
    for (Eigen::Index p = 0; p + 1 < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return std::real(a(i, i)) < std::real(a(j, j));
  });

  EigenSystem<Matrix> result;
  result.values.resize(n);
  result.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    result.values(k) = std::real(a(src, src));
    result.vectors.col(k) = v.col(src);
  }
  return result;
}

/// [start, size) ranges of eigenvalues that agree within rel * scale.
template <typename Vector>
std::vector<std::pair<Eigen::Index, Eigen::Index>> degenerate_clusters(
    const Vector& values, double scale, double rel = kDegenerateClusterRel) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;
  const double width = rel * scale;
  Eigen::Index start = 0;
  for (Eigen::Index k = 1; k <= values.size(); ++k) {
    if (k == values.size() || std::abs(double(values(k)) - double(values(k - 1))) > width) {
      clusters.emplace_back(start, k - start);
      start = k;
    }
  }
  return clusters;
}

/// exp(A) for anti-Hermitian A, through the eigendecomposition of iA.
template <typename Derived>
typename Derived::PlainObject unitary_exp(const Eigen::MatrixBase<Derived>& a) {
  using Matrix = typename Derived::PlainObject;
  using Scalar = typename Matrix::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;

  if (anti_hermiticity_defect(a) >= Real(1e-10) * (Real(1) + a.norm()))
    throw Error(Errc::NotAntiHermitian, "unitary_exp: input is not anti-Hermitian");
  Matrix h = Scalar(0, 1) * a;
  h = (h + h.adjoint().eval()) * Real(0.5);
  const auto es = herm_eig(h);
  const Eigen::Index n = a.rows();
  Matrix scaled = es.vectors;
  for (Eigen::Index k = 0; k < n; ++k) scaled.col(k) *= std::polar(Real(1), -es.values(k));
  return scaled * es.vectors.adjoint();
}

/// Principal square root of a Hermitian positive semidefinite matrix.
/// Eigenvalues down to -1e-12 are clamped to zero.
template <typename Derived>
typename Derived::PlainObject psd_sqrt(const Eigen::MatrixBase<Derived>& rho) {
  using Matrix = typename Derived::PlainObject;
  using Real = typename Eigen::NumTraits<typename Matrix::Scalar>::Real;

  const auto es = herm_eig(rho);
  Matrix scaled = es.vectors;
  for (Eigen::Index k = 0; k < rho.rows(); ++k) {
    Real lambda = es.values(k);
    if (lambda < Real(-1e-12)) throw Error(Errc::NotPSD, "psd_sqrt: negative eigenvalue");
    scaled.col(k) *= std::sqrt(std::max(lambda, Real(0)));
  }
  return scaled * es.vectors.adjoint();
}

/// Unitary factor of the polar decomposition, M (M^dagger M)^{-1/2}: the
/// unitary closest to M in Frobenius norm.
template <typename Derived>
typename Derived::PlainObject polar_unitary(const Eigen::MatrixBase<Derived>& m) {
  using Matrix = typename Derived::PlainObject;
  using Real = typename Eigen::NumTraits<typename Matrix::Scalar>::Real;

  if (m.rows() != m.cols()) throw Error(Errc::InvalidArgument, "polar_unitary: matrix is not square");
  Matrix gram = m.adjoint() * m;
  gram = (gram + gram.adjoint().eval()) * Real(0.5);
  const auto es = herm_eig(gram);
  if (es.values(0) <= Real(0) || std::sqrt(es.values(0)) <= Real(1e-12))
    throw Error(Errc::RankDeficient, "polar_unitary: singular input");
  Matrix scaled = es.vectors;
  for (Eigen::Index k = 0; k < m.rows(); ++k) scaled.col(k) /= std::sqrt(es.values(k));
  return m * (scaled * es.vectors.adjoint());
}

}  // namespace geophase
