#pragma once

#include <functional>

#include "corrqec/qstate.hpp"

// Exact reduced dynamics of a register of qubits coupled to a common
// dephasing bath: a damping superoperator and a bath-induced ZZ unitary,
// both diagonal in the sigma_z product basis and therefore applied as
// element-wise factors
//
//   rho_ab(t) = exp(-E(a,b;t) + i*phi(a,b;t)) * rho_ab(0).
//
// Damping exponent (calibrated so the Bell closed forms hold verbatim:
// C(t) = e^{-4(G11+2G12+G22)} for |phi+->, e^{-4(G11-2G12+G22)} for |psi+->):
//   E(a,b;t) = sum over all ordered pairs (j,j') of Gamma_jj'(t) Dj Dj',
//   Dj = s_j(b) - s_j(a).
//
// Coherent phase (unordered pairs, effective coupling V_jj' Z_j Z_j'; the
// resulting two-qubit entanglement wave |sin 2Vt| has period pi/2V, i.e.
// angular frequency 4V):
//   phi(a,b;t) = t * sum_{j<j'} V_jj' (s_j(a)s_j'(a) - s_j(b)s_j'(b)).

namespace corrqec {

struct BathSpec {
  int n_physical;
  Eigen::MatrixXd gamma_rate;  // Gdot, symmetric PSD; Gamma(t) = Gdot * profile(t)
  Eigen::MatrixXd v_coupling;  // V, symmetric; diagonal irrelevant (z_j^2 = 1)
  // Monotone time profile for Gamma(t); only the linear default is exercised.
  std::function<double(double)> gamma_profile;

  BathSpec(int n, Eigen::MatrixXd gamma_rate_in, Eigen::MatrixXd v_in,
           std::function<double(double)> profile = nullptr);

  // Uniform bath: V_jj' = v for all j != j', Gdot_jj' = gamma_dot for all j,j'.
  // The stock scenarios use uniform(n, 1.0, 0.1).
  static BathSpec uniform(int n, double v, double gamma_dot);

  Eigen::MatrixXd gamma_at(double t) const;
};

// E(a,b;t) >= 0; exactly 0 when a == b. Bitstrings are basis indices.
double damping_exponent(unsigned a, unsigned b, const BathSpec& bath, double t);

// phi(a,b;t) in radians; 0 when a == b and for single-qubit registers.
double coupling_phase(unsigned a, unsigned b, const BathSpec& bath, double t);

// Full table F_ab = exp(-E + i*phi) for a fixed (bath, t); precompute and
// share read-only when evolving many states over the same window.
Matrix evolution_factors(const BathSpec& bath, double t);

// rho_ab -> F_ab * rho_ab. Pure dephasing: the diagonal is untouched.
// Rejects t < 0 and dimension mismatches.
Matrix evolve(const Matrix& rho, const BathSpec& bath, double t);

// Same map using a precomputed factor table.
Matrix evolve_with_factors(const Matrix& rho, const Matrix& factors);

}  // namespace corrqec
