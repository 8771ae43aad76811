#pragma once

#include <array>
#include <vector>

#include "corrqec/dephasing.hpp"
#include "corrqec/qstate.hpp"

// Three-qubit phase-flip code for two logical qubits (six physical qubits).
//
// Logical basis per block: |0~> = |000>_x = |+++>, |1~> = |111>_x = |--->.
// Stabilizers per block (a,b,c): X_a X_b and X_b X_c; syndrome -> correction:
// (-,+) -> Z_a, (-,-) -> Z_b, (+,-) -> Z_c, (+,+) -> identity.
// Recovery is the deterministic sum-over-syndromes CPTP channel; no sampling.

namespace corrqec {

struct CodeLayout {
  std::vector<std::array<int, 3>> blocks;

  static CodeLayout standard();  // {(0,1,2),(3,4,5)}
  int n_logical() const { return static_cast<int>(blocks.size()); }
  int n_physical() const { return 3 * n_logical(); }
  void validate() const;  // disjoint triples covering 0..3n-1
};

// Precomputed encoding isometry and per-block recovery operators for a
// layout; built once, shared read-only.
class Code {
 public:
  explicit Code(CodeLayout layout);

  const CodeLayout& layout() const { return layout_; }
  // Columns are the encoded logical basis states (|0~0~>, |0~1~>, ...).
  const Matrix& isometry() const { return isometry_; }

  Matrix encode(const Matrix& rho_L) const;
  Matrix recover(const Matrix& rho_P) const;
  // W^dag rho W renormalized; *leakage (if given) receives 1 - tr(W^dag rho W).
  // Leakage beyond 1e-6 is a numerical_error: decoding an uncorrected state.
  Matrix decode(const Matrix& rho_P, double* leakage = nullptr) const;
  // recover(evolve(rho_P, bath, T)); Gamma(t) restarts from 0 each window.
  Matrix qec_cycle(const Matrix& rho_P, const BathSpec& bath, double T) const;
  Matrix qec_cycle_with_factors(const Matrix& rho_P, const Matrix& factors) const;

  // Per-block recovery Kraus operators C_s P_s (4 per block), for CPTP checks.
  const std::vector<std::vector<Matrix>>& recovery_kraus() const {
    return recovery_;
  }

 private:
  CodeLayout layout_;
  Matrix isometry_;
  std::vector<std::vector<Matrix>> recovery_;
};

// The default two-logical-qubit code on layout {(0,1,2),(3,4,5)}.
const Code& default_code();

// Free-function forms on the default code, matching the module interface.
Matrix encode(const Matrix& rho_L);
Matrix recover(const Matrix& rho_P);
Matrix decode(const Matrix& rho_P, double* leakage = nullptr);
Matrix qec_cycle(const Matrix& rho_P, const BathSpec& bath, double T);

}  // namespace corrqec
