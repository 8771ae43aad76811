#include "corrqec/qec3.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace corrqec {

namespace {

Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

// Single-site Pauli embedded at qubit j of an n-qubit register (qubit 0 is
// the most significant bit).
Matrix single_site(const Eigen::Matrix2cd& op, int j, int n) {
  Matrix out = identity(Eigen::Index{1} << j);
  out = tensor(out, Matrix(op));
  return tensor(out, identity(Eigen::Index{1} << (n - 1 - j)));
}

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd x;
  x << 0, 1, 1, 0;
  return x;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd z;
  z << 1, 0, 0, -1;
  return z;
}

}  // namespace

CodeLayout CodeLayout::standard() {
  CodeLayout layout;
  layout.blocks = {{0, 1, 2}, {3, 4, 5}};
  return layout;
}

void CodeLayout::validate() const {
  if (blocks.empty()) {
    throw std::invalid_argument("CodeLayout: no blocks");
  }
  const int n = n_physical();
  std::vector<bool> seen(static_cast<size_t>(n), false);
  for (const auto& block : blocks) {
    for (int q : block) {
      if (q < 0 || q >= n || seen[static_cast<size_t>(q)]) {
        throw std::invalid_argument(
            "CodeLayout: blocks must be disjoint triples covering 0.." +
            std::to_string(n - 1));
      }
      seen[static_cast<size_t>(q)] = true;
    }
  }
}

Code::Code(CodeLayout layout) : layout_(std::move(layout)) {
  layout_.validate();
  const int n_log = layout_.n_logical();
  const int n_phys = layout_.n_physical();
  const Eigen::Index dim_log = Eigen::Index{1} << n_log;
  const Eigen::Index dim_phys = Eigen::Index{1} << n_phys;

  // Encoded basis columns: logical bit 0 -> |+++> on its block, bit 1 ->
  // |--->, so the amplitude on a physical basis state is a product of
  // 2^{-3/2} signs.
  isometry_ = Matrix::Zero(dim_phys, dim_log);
  const double amp = std::pow(2.0, -1.5 * n_log);
  for (Eigen::Index l = 0; l < dim_log; ++l) {
    for (Eigen::Index p = 0; p < dim_phys; ++p) {
      double sign = 1.0;
      for (int i = 0; i < n_log; ++i) {
        if (((l >> (n_log - 1 - i)) & 1) == 0) continue;  // |+++>: all +
        unsigned pattern = 0;
        for (int q : layout_.blocks[static_cast<size_t>(i)]) {
          pattern = (pattern << 1) | ((p >> (n_phys - 1 - q)) & 1);
        }
        if (std::popcount(pattern) & 1) sign = -sign;
      }
      isometry_(p, l) = amp * sign;
    }
  }

  // Per-block recovery Kraus operators C_s P_s over the syndrome s of the
  // stabilizers (X_a X_b, X_b X_c).
  const Matrix one = identity(dim_phys);
  for (const auto& block : layout_.blocks) {
    const Matrix xa = single_site(pauli_x(), block[0], n_phys);
    const Matrix xb = single_site(pauli_x(), block[1], n_phys);
    const Matrix xc = single_site(pauli_x(), block[2], n_phys);
    const Matrix s1 = xa * xb;
    const Matrix s2 = xb * xc;

    std::vector<Matrix> kraus;
    for (int sgn1 : {+1, -1}) {
      for (int sgn2 : {+1, -1}) {
        const Matrix proj =
            ((one + double(sgn1) * s1) / 2.0) * ((one + double(sgn2) * s2) / 2.0);
        Matrix corr;
        if (sgn1 == +1 && sgn2 == +1) {
          corr = one;
        } else if (sgn1 == -1 && sgn2 == +1) {
          corr = single_site(pauli_z(), block[0], n_phys);
        } else if (sgn1 == -1 && sgn2 == -1) {
          corr = single_site(pauli_z(), block[1], n_phys);
        } else {
          corr = single_site(pauli_z(), block[2], n_phys);
        }
        kraus.push_back(corr * proj);
      }
    }
    recovery_.push_back(std::move(kraus));
  }
}

Matrix Code::encode(const Matrix& rho_L) const {
  if (rho_L.rows() != isometry_.cols() || rho_L.cols() != isometry_.cols()) {
    throw std::invalid_argument("encode: logical state dimension mismatch");
  }
  return isometry_ * rho_L * isometry_.adjoint();
}

Matrix Code::recover(const Matrix& rho_P) const {
  if (rho_P.rows() != isometry_.rows() || rho_P.cols() != isometry_.rows()) {
    throw std::invalid_argument("recover: physical state dimension mismatch");
  }
  Matrix rho = rho_P;
  for (const auto& kraus : recovery_) {
    Matrix next = Matrix::Zero(rho.rows(), rho.cols());
    for (const Matrix& k : kraus) {
      next += k * rho * k.adjoint();
    }
    rho = std::move(next);
  }
  return rho;
}

Matrix Code::decode(const Matrix& rho_P, double* leakage) const {
  if (rho_P.rows() != isometry_.rows() || rho_P.cols() != isometry_.rows()) {
    throw std::invalid_argument("decode: physical state dimension mismatch");
  }
  Matrix rho_L = isometry_.adjoint() * rho_P * isometry_;
  const double in_code = std::real(rho_L.trace());
  const double leak = 1.0 - in_code;
  if (leakage) *leakage = leak;
  if (leak > 1e-6) {
    throw numerical_error("decode: code-space leakage " + std::to_string(leak) +
                          "; state was not recovered before decoding");
  }
  return rho_L / in_code;
}

Matrix Code::qec_cycle(const Matrix& rho_P, const BathSpec& bath, double T) const {
  // Gamma(t) restarts from 0 each window, so the window always spans [0, T].
  return recover(evolve(rho_P, bath, T));
}

Matrix Code::qec_cycle_with_factors(const Matrix& rho_P, const Matrix& factors) const {
  return recover(evolve_with_factors(rho_P, factors));
}

const Code& default_code() {
  static const Code code(CodeLayout::standard());
  return code;
}

Matrix encode(const Matrix& rho_L) { return default_code().encode(rho_L); }
Matrix recover(const Matrix& rho_P) { return default_code().recover(rho_P); }
Matrix decode(const Matrix& rho_P, double* leakage) {
  return default_code().decode(rho_P, leakage);
}
Matrix qec_cycle(const Matrix& rho_P, const BathSpec& bath, double T) {
  return default_code().qec_cycle(rho_P, bath, T);
}

}  // namespace corrqec
