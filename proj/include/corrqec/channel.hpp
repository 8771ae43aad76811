#pragma once

#include <utility>
#include <vector>

#include "corrqec/qec3.hpp"

// The effective logical two-qubit channel of one QEC period and its
// representations: Choi matrix, Kraus operators, chi matrix over the
// logical-X operator basis, the seven-operator family fit, and the
// small-T master-equation analytics.

namespace corrqec {

struct LogicalChannel {
  // Choi = sum_ij E_ij (x) Lambda(E_ij) over the 16 logical matrix units;
  // trace 4 for a trace-preserving map.
  Matrix choi;
  double T;
  BathSpec bath;
};

struct ChiMatrix {
  // Process weights over {1, X~1, X~2, X~1X~2}; trace(chi) + leakage = 1.
  Eigen::Matrix4cd chi;
  double leakage;
};

struct KrausFamilyFit {
  double m0, m1, m2, m3, m4, m5, m6_abs;
  int m6_sign;     // sign(Im chi(1, X12)); M6 = m6_abs (1 - m6_sign i X~1X~2)
  int cross_sign;  // sign(Re chi(X1, X2)); M4 = m4 (X~1 + cross_sign X~2),
                   // M5 = m5 (1 - cross_sign X~1X~2)
  double residual;
  bool outside_family;  // residual > 1e-3
};

struct MasterRates {
  double gamma1, gamma2;
};

// Choi matrix of rho_L -> decode(recover(evolve(encode(rho_L), bath, T))),
// built by propagating the 16 matrix units. The 16 propagations are
// independent; they run on the worker budget and are summed in fixed order.
LogicalChannel logical_channel(const BathSpec& bath, double T,
                               const CodeLayout& layout = CodeLayout::standard());

// Kraus operators from the Choi eigendecomposition, discarding eigenvalues
// below 1e-10 of the largest. Rejects non-PSD Choi beyond -1e-10.
std::vector<Matrix> choi_to_kraus(const LogicalChannel& ch);

// Projects the process onto the Pauli operator basis and returns the 4x4
// block over {1, X~1, X~2, X~1X~2} plus the weight outside it.
ChiMatrix chi_in_x_basis(const LogicalChannel& ch);

// Constructive fit of the seven-operator family:
//   m4^2 = m5^2 = |Re chi(X1,X2)| with cross_sign recorded (trace
//   preservation forces Re chi(1,X12) = -Re chi(X1,X2), so the magnitude is
//   shared and the relative sign carries the information);
//   m6_abs^2 = |Im chi(1,X12)|, m6_sign = sign(Im chi(1,X12));
//   m1^2 = chi(X1,X1) - m4^2, m2^2 = chi(X2,X2) - m4^2,
//   m0^2 = chi(1,1) - m5^2 - m6^2, m3^2 = chi(X12,X12) - m5^2 - m6^2.
// Negative intermediate squares are clipped to 0; magnitudes beyond 1e-9 are
// added to the residual. Residual also collects the unexplained entries
// (1,X1),(1,X2),(X1,X12),(X2,X12) and the family-incompatible structure
// |Im chi(X1,X2)| and |Re chi(X1,X2) + Re chi(1,X12)|.
// Rejects leakage > 1e-6.
KrausFamilyFit fit_seven_kraus(const ChiMatrix& chi);

// The seven operators reconstructed from a fit (order M0..M6).
std::vector<Matrix> reconstruct_seven(const KrausFamilyFit& fit);

// gamma_i = (2/T) sum_{j>j' in block i} (T^2 V_jj'^2 + 2 Gamma_jj'(T)^2
//           + Gamma_jj(T) Gamma_j'j'(T)). Rejects T <= 0.
MasterRates master_rates(const BathSpec& bath, double T,
                         const CodeLayout& layout = CodeLayout::standard());

// Closed forms for an initial logical Bell |phi~+>:
//   C(t) = e^{-2(g1+g2)t},  F(t) = (1 + e^{-2(g1+g2)t}) / 2.
std::pair<double, double> analytic_qec_predictions(const MasterRates& rates,
                                                   double t);

// CPTP check on a Choi matrix (trace-4 convention). Fills the worst PSD
// violation (most negative eigenvalue, 0 if none) and TP violation
// (max |ptr_out(choi) - 1|).
bool is_cptp(const Matrix& choi, double* psd_violation = nullptr,
             double* tp_violation = nullptr);

}  // namespace corrqec
