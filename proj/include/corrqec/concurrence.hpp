#pragma once

#include "corrqec/qstate.hpp"

// Wootters concurrence of a two-qubit density matrix.

namespace corrqec {

// rho~ = (sigma_y x sigma_y) rho* (sigma_y x sigma_y). 4x4 only.
Matrix spin_flip(const Matrix& rho);

// C = max(0, l1 - l2 - l3 - l4) with l_i the descending square roots of the
// eigenvalues of rho * rho~, computed through the Hermitian form
// sqrt(rho) rho~ sqrt(rho) (same spectrum, no spurious complex parts).
// Eigenvalues below 1e-13 of the largest are zeroed before the square root:
// they sit at the eigensolver's noise floor, which the square root would
// otherwise amplify to ~1e-8 and leak into C. Result snapped to [0,1].
// Rejects inputs that are not 4x4 or not PSD within -1e-10.
double concurrence(const Matrix& rho);

}  // namespace corrqec
