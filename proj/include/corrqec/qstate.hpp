#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

// Dense complex linear-algebra substrate shared by all modules.
//
// Conventions (fixed project-wide):
//   - Qubit index 0 is the most significant bit of a computational-basis index.
//   - sigma_z eigenvalue of bit value 0 is +1, of bit value 1 is -1.
//   - Registers never exceed 6 qubits (64x64), so everything is dense.

namespace corrqec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Thrown when a quantity breaches a numerical tolerance (non-PSD state,
// code-space leakage, destroyed normalization). The CLI maps this to exit 2.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

struct HermitianSpectrum {
  Eigen::VectorXd eigenvalues;  // sorted descending
  Matrix eigenvectors;          // columns, same order as eigenvalues
};

// Number of qubits for a dimension that must be a power of two.
int qubit_count(Eigen::Index dim);

// sigma_z eigenvalue (+1/-1) of qubit j in basis state a of an n-qubit register.
inline int sz_of_bit(unsigned a, int j, int n) {
  return ((a >> (n - 1 - j)) & 1u) ? -1 : +1;
}

// |psi><psi|. Rejects states whose norm deviates from 1 by more than 1e-9.
Matrix density_from_pure(const Vector& psi);

// Kronecker products; a's qubits take the lower (more significant) indices.
Matrix tensor(const Matrix& a, const Matrix& b);
Vector tensor(const Vector& a, const Vector& b);

// Partial trace keeping the listed qubits, in the listed order.
Matrix partial_trace(const Matrix& rho, const std::vector<int>& keep);

// F = <psi|rho|psi>, clipped to [0,1].
double fidelity_pure(const Matrix& rho, const Vector& psi);

// Eigendecomposition of a Hermitian matrix (rejects max|A - A^dag| > 1e-10),
// eigenvalues sorted descending. Reentrant.
HermitianSpectrum hermitian_eigensystem(const Matrix& A);

// (1/2)||a - b||_1 via the eigenvalues of the Hermitian difference.
double trace_distance(const Matrix& a, const Matrix& b);

// PSD square root via eigendecomposition. Eigenvalues in [-1e-10, 0) are
// clipped to 0; anything below -1e-10 is a numerical_error.
Matrix matrix_sqrt_psd(const Matrix& rho);

// Density-matrix validity per the shared invariants: Hermitian within 1e-12,
// unit trace within 1e-12, smallest eigenvalue >= -1e-10. On failure returns
// false and, if given, fills *why.
bool is_valid_density(const Matrix& rho, std::string* why = nullptr);

}  // namespace corrqec
