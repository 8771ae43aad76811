#include "corrqec/concurrence.hpp"

#include <algorithm>
#include <cmath>

namespace corrqec {

Matrix spin_flip(const Matrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw std::invalid_argument("spin_flip: expects a 4x4 two-qubit operator");
  }
  Matrix yy = Matrix::Zero(4, 4);  // sigma_y (x) sigma_y, real symmetric
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  return yy * rho.conjugate() * yy;
}

double concurrence(const Matrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw std::invalid_argument("concurrence: expects a 4x4 two-qubit state");
  }
  const Matrix root = matrix_sqrt_psd(rho);  // rejects non-PSD inputs
  Matrix m = root * spin_flip(rho) * root;
  m = (m + m.adjoint()) / 2.0;  // Hermitian up to rounding; symmetrize

  const HermitianSpectrum spec = hermitian_eigensystem(m);
  const double lmax = std::max(spec.eigenvalues(0), 0.0);
  const double floor = 1e-13 * lmax;

  double c = 0.0;
  for (Eigen::Index i = 0; i < 4; ++i) {
    double ev = spec.eigenvalues(i);
    if (ev < -1e-10) {
      throw numerical_error("concurrence: eigenvalue " + std::to_string(ev) +
                            " of sqrt(rho) rho~ sqrt(rho) below tolerance");
    }
    // Zero out the eigensolver noise floor; sqrt would amplify ~1e-16
    // residues on pure states to ~1e-8 and leak them into the result.
    if (ev < floor) ev = 0.0;
    const double root_ev = std::sqrt(ev);
    c += (i == 0) ? root_ev : -root_ev;
  }
  return std::clamp(c, 0.0, 1.0);
}

}  // namespace corrqec
