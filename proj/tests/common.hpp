#pragma once

#include <cmath>
#include <random>

#include "corrqec/qstate.hpp"

// Shared deterministic random generators for the test suites. Engine output
// is consumed manually so sequences are identical across standard libraries.

namespace testutil {

using corrqec::Complex;
using corrqec::Matrix;
using corrqec::Vector;

struct Rng {
  std::mt19937_64 engine;

  explicit Rng(std::uint64_t seed) : engine(seed) {}

  double unif() {  // [0, 1)
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
  }

  double gauss() {  // Box-Muller, one value per call
    double u1 = unif();
    while (u1 == 0.0) u1 = unif();
    const double u2 = unif();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  Complex cgauss() { return Complex(gauss(), gauss()); }
};

inline Vector random_pure(Rng& rng, Eigen::Index dim) {
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.cgauss();
  return v / v.norm();
}

// Full-rank-by-default random density matrix (Wishart construction).
inline Matrix random_density(Rng& rng, Eigen::Index dim, Eigen::Index rank = 0) {
  if (rank <= 0) rank = dim;
  Matrix g(dim, rank);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < rank; ++j) g(i, j) = rng.cgauss();
  }
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

// Haar-ish single-qubit unitary from a random special-unitary parametrization.
inline Matrix random_unitary2(Rng& rng) {
  const double a = 6.283185307179586 * rng.unif();
  const double b = 6.283185307179586 * rng.unif();
  const double th = std::acos(2.0 * rng.unif() - 1.0) / 2.0;
  Matrix u(2, 2);
  u << std::polar(std::cos(th), a), std::polar(std::sin(th), b),
      -std::polar(std::sin(th), -b), std::polar(std::cos(th), -a);
  return u;
}

inline Matrix random_hermitian(Rng& rng, Eigen::Index dim) {
  Matrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = rng.cgauss();
  }
  return (a + a.adjoint()) / 2.0;
}

// Random symmetric PSD rate matrix with entries on the stock-bath scale.
inline Eigen::MatrixXd random_psd_rates(Rng& rng, int n, double scale = 0.1) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = rng.gauss();
  }
  Eigen::MatrixXd psd = g * g.transpose();
  return psd * (scale / n);
}

inline Eigen::MatrixXd random_symmetric(Rng& rng, int n, double scale = 1.0) {
  Eigen::MatrixXd v(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) v(i, j) = rng.gauss();
  }
  return (v + v.transpose()) * (scale / 2.0);
}

}  // namespace testutil
