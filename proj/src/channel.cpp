#include "corrqec/channel.hpp"

#include <cmath>

#include "parallel.hpp"

namespace corrqec {

namespace {

// The four two-qubit operators {1, X1, X2, X1X2} on the decoded logical space.
std::array<Matrix, 4> x_operator_basis() {
  Matrix id2 = Matrix::Identity(2, 2);
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  std::array<Matrix, 4> ops;
  ops[0] = Matrix::Identity(4, 4);
  ops[1] = tensor(x, id2);
  ops[2] = tensor(id2, x);
  ops[3] = tensor(x, x);
  return ops;
}

}  // namespace

LogicalChannel logical_channel(const BathSpec& bath, double T,
                               const CodeLayout& layout) {
  const Code code(layout);
  if (bath.n_physical != layout.n_physical()) {
    throw std::invalid_argument("logical_channel: bath register does not match the code layout");
  }
  const Eigen::Index d = Eigen::Index{1} << layout.n_logical();
  const Matrix& w = code.isometry();
  const Matrix factors = evolution_factors(bath, T);

  // Propagate each matrix unit E_ij through encode -> dephase -> recover ->
  // project back (W^dag . W, no renormalization: the map must stay linear).
  // Recovery lands exactly in the code space, so no weight is dropped.
  std::vector<Matrix> blocks(static_cast<size_t>(d * d));
  detail::parallel_for(static_cast<int>(d * d), [&](int idx) {
    const Eigen::Index i = idx / d;
    const Eigen::Index j = idx % d;
    Matrix unit = Matrix::Zero(d, d);
    unit(i, j) = 1.0;
    const Matrix lifted = w * unit * w.adjoint();
    const Matrix evolved = evolve_with_factors(lifted, factors);
    blocks[static_cast<size_t>(idx)] = w.adjoint() * code.recover(evolved) * w;
  });

  LogicalChannel ch{Matrix::Zero(d * d, d * d), T, bath};
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      ch.choi.block(i * d, j * d, d, d) = blocks[static_cast<size_t>(i * d + j)];
    }
  }
  return ch;
}

std::vector<Matrix> choi_to_kraus(const LogicalChannel& ch) {
  const Eigen::Index dd = ch.choi.rows();
  const Eigen::Index d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(dd))));
  if (d * d != dd || ch.choi.cols() != dd) {
    throw std::invalid_argument("choi_to_kraus: Choi matrix is not d^2 x d^2");
  }
  const HermitianSpectrum spec = hermitian_eigensystem((ch.choi + ch.choi.adjoint()) / 2.0);
  const double lmax = std::max(spec.eigenvalues(0), 0.0);
  if (spec.eigenvalues(dd - 1) < -1e-10) {
    throw numerical_error("choi_to_kraus: Choi eigenvalue " +
                          std::to_string(spec.eigenvalues(dd - 1)) + " below PSD tolerance");
  }

  std::vector<Matrix> kraus;
  for (Eigen::Index k = 0; k < dd; ++k) {
    const double ev = spec.eigenvalues(k);
    if (ev <= 1e-10 * lmax) continue;
    const double scale = std::sqrt(ev);
    Matrix m(d, d);
    // Choi column convention: component (i*d + out) of an eigenvector is the
    // (out, i) element of the Kraus operator.
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index out = 0; out < d; ++out) {
        m(out, i) = scale * spec.eigenvectors(i * d + out, k);
      }
    }
    kraus.push_back(std::move(m));
  }
  return kraus;
}

ChiMatrix chi_in_x_basis(const LogicalChannel& ch) {
  if (ch.choi.rows() != 16) {
    throw std::invalid_argument("chi_in_x_basis: expects a two-logical-qubit channel");
  }
  const std::vector<Matrix> kraus = choi_to_kraus(ch);
  const auto paulis = x_operator_basis();

  ChiMatrix out;
  out.chi.setZero();
  double total = 0.0;
  double explained = 0.0;
  for (const Matrix& m : kraus) {
    Eigen::Vector4cd c;
    for (int p = 0; p < 4; ++p) {
      c(p) = (paulis[static_cast<size_t>(p)] * m).trace() / 2.0;
    }
    out.chi += (c * c.adjoint()) / 4.0;
    total += std::real((m.adjoint() * m).trace()) / 4.0;
    explained += c.squaredNorm() / 4.0;
  }
  out.leakage = total - explained;
  return out;
}

KrausFamilyFit fit_seven_kraus(const ChiMatrix& chi) {
  if (chi.leakage > 1e-6) {
    throw numerical_error("fit_seven_kraus: weight " + std::to_string(chi.leakage) +
                          " outside the X operator span");
  }
  const Eigen::Matrix4cd& x = chi.chi;

  KrausFamilyFit fit{};
  double residual = 0.0;

  // Trace preservation forces Re chi(1,X12) = -Re chi(X1,X2): the cross
  // weight magnitude is shared between M4 and M5 and only its sign is free.
  const double cross = std::real(x(1, 2));
  fit.cross_sign = (cross >= 0.0) ? +1 : -1;
  const double m4_sq = std::abs(cross);
  const double m5_sq = m4_sq;

  const double im06 = std::imag(x(0, 3));
  fit.m6_sign = (im06 >= 0.0) ? +1 : -1;
  const double m6_sq = std::abs(im06);

  auto clipped_sqrt = [&residual](double sq) {
    if (sq < 0.0) {
      if (-sq > 1e-9) residual += -sq;
      return 0.0;
    }
    return std::sqrt(sq);
  };

  fit.m4 = std::sqrt(m4_sq);
  fit.m5 = std::sqrt(m5_sq);
  fit.m6_abs = std::sqrt(m6_sq);
  fit.m1 = clipped_sqrt(std::real(x(1, 1)) - m4_sq);
  fit.m2 = clipped_sqrt(std::real(x(2, 2)) - m4_sq);
  fit.m0 = clipped_sqrt(std::real(x(0, 0)) - m5_sq - m6_sq);
  fit.m3 = clipped_sqrt(std::real(x(3, 3)) - m5_sq - m6_sq);

  // Entries the family cannot produce, plus the two structural relations it
  // requires (real cross weight; opposite-sign pairing).
  residual += std::abs(x(0, 1)) + std::abs(x(0, 2)) + std::abs(x(1, 3)) + std::abs(x(2, 3));
  residual += std::abs(std::imag(x(1, 2)));
  residual += std::abs(std::real(x(1, 2)) + std::real(x(0, 3)));

  fit.residual = residual;
  fit.outside_family = residual > 1e-3;
  return fit;
}

std::vector<Matrix> reconstruct_seven(const KrausFamilyFit& fit) {
  const auto paulis = x_operator_basis();
  const Matrix id = paulis[0];
  const Matrix x1 = paulis[1];
  const Matrix x2 = paulis[2];
  const Matrix x12 = paulis[3];
  const Complex i_unit(0.0, 1.0);
  const double cross = fit.cross_sign;

  std::vector<Matrix> ops;
  ops.push_back(fit.m0 * id);
  ops.push_back(fit.m1 * x1);
  ops.push_back(fit.m2 * x2);
  ops.push_back(fit.m3 * x12);
  ops.push_back(fit.m4 * (x1 + cross * x2));
  ops.push_back(fit.m5 * (id - cross * x12));
  ops.push_back(fit.m6_abs * (id - double(fit.m6_sign) * i_unit * x12));
  return ops;
}

MasterRates master_rates(const BathSpec& bath, double T, const CodeLayout& layout) {
  if (T <= 0.0) {
    throw std::invalid_argument("master_rates: period must be positive");
  }
  if (layout.n_logical() != 2) {
    throw std::invalid_argument("master_rates: defined for two logical blocks");
  }
  if (bath.n_physical != layout.n_physical()) {
    throw std::invalid_argument("master_rates: bath register does not match the code layout");
  }
  const Eigen::MatrixXd gamma = bath.gamma_at(T);

  double rates[2];
  for (int i = 0; i < 2; ++i) {
    const auto& block = layout.blocks[static_cast<size_t>(i)];
    double acc = 0.0;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < a; ++b) {
        const int j = block[static_cast<size_t>(a)];
        const int jp = block[static_cast<size_t>(b)];
        acc += T * T * bath.v_coupling(j, jp) * bath.v_coupling(j, jp) +
               2.0 * gamma(j, jp) * gamma(j, jp) + gamma(j, j) * gamma(jp, jp);
      }
    }
    rates[i] = 2.0 * acc / T;
  }
  return MasterRates{rates[0], rates[1]};
}

std::pair<double, double> analytic_qec_predictions(const MasterRates& rates, double t) {
  const double c = std::exp(-2.0 * (rates.gamma1 + rates.gamma2) * t);
  return {c, (1.0 + c) / 2.0};
}

bool is_cptp(const Matrix& choi, double* psd_violation, double* tp_violation) {
  const Eigen::Index dd = choi.rows();
  const Eigen::Index d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(dd))));
  if (d * d != dd || choi.cols() != dd) {
    throw std::invalid_argument("is_cptp: Choi matrix is not d^2 x d^2");
  }
  const HermitianSpectrum spec = hermitian_eigensystem((choi + choi.adjoint()) / 2.0);
  const double min_ev = spec.eigenvalues(dd - 1);
  if (psd_violation) *psd_violation = std::min(min_ev, 0.0);

  // Trace preservation: tr Lambda(E_ij) = delta_ij over the unit blocks.
  double tp = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const Complex block_trace = choi.block(i * d, j * d, d, d).trace();
      const Complex expect = (i == j) ? Complex(1.0) : Complex(0.0);
      tp = std::max(tp, std::abs(block_trace - expect));
    }
  }
  if (tp_violation) *tp_violation = tp;

  return min_ev >= -1e-10 && tp <= 1e-10;
}

}  // namespace corrqec
