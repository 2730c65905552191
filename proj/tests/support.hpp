#pragma once

// Random inputs and small oracles shared by the unit tests.

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "geophase/model.hpp"

namespace testing {

using geophase::Complex;

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(7);
  return engine;
}

inline double normal() {
  static std::normal_distribution<double> dist;
  return dist(rng());
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Eigen::MatrixXcd random_complex(int n) {
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(normal(), normal());
  return m;
}

inline Eigen::MatrixXcd random_hermitian(int n) {
  const Eigen::MatrixXcd m = random_complex(n);
  return 0.5 * (m + m.adjoint());
}

inline Eigen::MatrixXcd random_anti_hermitian(int n) {
  const Eigen::MatrixXcd m = random_complex(n);
  return 0.5 * (m - m.adjoint());
}

inline geophase::Vec5 random_vec5() {
  geophase::Vec5 v;
  for (int i = 0; i < 5; ++i) v(i) = normal();
  return v;
}

inline geophase::ParamPoint random_point() { return geophase::ParamPoint(random_vec5()); }

/// d/dphi of sphere_point at (theta, phi).
inline geophase::Vec5 sphere_phi_tangent(double theta, double phi, double radius) {
  const double a = radius / std::numbers::sqrt2 * std::sin(theta);
  geophase::Vec5 d;
  d << -a * std::sin(phi), a * std::cos(phi), -a * std::sin(phi), a * std::cos(phi), 0.0;
  return d;
}

inline double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace testing
