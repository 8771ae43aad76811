#include "corrqec/qstate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace corrqec {

namespace {

void require_square(const Matrix& m, const char* who) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square and non-empty");
  }
}

}  // namespace

int qubit_count(Eigen::Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("qubit_count: dimension " + std::to_string(dim) +
                                " is not a power of two >= 2");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

Matrix density_from_pure(const Vector& psi) {
  if (psi.size() == 0) {
    throw std::invalid_argument("density_from_pure: empty state vector");
  }
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-9) {
    throw std::invalid_argument("density_from_pure: state norm " + std::to_string(norm) +
                                " deviates from 1 beyond 1e-9");
  }
  return psi * psi.adjoint();
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

Matrix partial_trace(const Matrix& rho, const std::vector<int>& keep) {
  require_square(rho, "partial_trace");
  const int n = qubit_count(rho.rows());
  std::vector<bool> kept(static_cast<size_t>(n), false);
  for (int q : keep) {
    if (q < 0 || q >= n) {
      throw std::invalid_argument("partial_trace: qubit index " + std::to_string(q) +
                                  " outside register of " + std::to_string(n) + " qubits");
    }
    if (kept[static_cast<size_t>(q)]) {
      throw std::invalid_argument("partial_trace: duplicate qubit index " + std::to_string(q));
    }
    kept[static_cast<size_t>(q)] = true;
  }
  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (!kept[static_cast<size_t>(q)]) traced.push_back(q);
  }

  const int k = static_cast<int>(keep.size());
  const int m = static_cast<int>(traced.size());
  const unsigned dim_out = 1u << k;
  const unsigned dim_tr = 1u << m;
  Matrix out = Matrix::Zero(dim_out, dim_out);

  // Scatter the bits of (output index, traced index) back onto the full
  // register; keep[0] is the most significant output bit.
  auto full_index = [&](unsigned part, unsigned tr) {
    unsigned idx = 0;
    for (int i = 0; i < k; ++i) {
      const unsigned bit = (part >> (k - 1 - i)) & 1u;
      idx |= bit << (n - 1 - keep[static_cast<size_t>(i)]);
    }
    for (int i = 0; i < m; ++i) {
      const unsigned bit = (tr >> (m - 1 - i)) & 1u;
      idx |= bit << (n - 1 - traced[static_cast<size_t>(i)]);
    }
    return idx;
  };

  for (unsigned p = 0; p < dim_out; ++p) {
    for (unsigned q = 0; q < dim_out; ++q) {
      Complex acc = 0.0;
      for (unsigned t = 0; t < dim_tr; ++t) {
        acc += rho(full_index(p, t), full_index(q, t));
      }
      out(p, q) = acc;
    }
  }
  return out;
}

double fidelity_pure(const Matrix& rho, const Vector& psi) {
  require_square(rho, "fidelity_pure");
  if (psi.size() != rho.rows()) {
    throw std::invalid_argument("fidelity_pure: state/operator dimension mismatch");
  }
  const double f = std::real(Complex(psi.adjoint() * rho * psi));
  return std::clamp(f, 0.0, 1.0);
}

HermitianSpectrum hermitian_eigensystem(const Matrix& A) {
  require_square(A, "hermitian_eigensystem");
  const double asym = (A - A.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) {
    throw numerical_error("hermitian_eigensystem: matrix deviates from Hermitian by " +
                          std::to_string(asym));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(A);
  if (solver.info() != Eigen::Success) {
    throw numerical_error("hermitian_eigensystem: eigensolver failed to converge");
  }

  const Eigen::Index d = A.rows();
  HermitianSpectrum spec;
  spec.eigenvalues.resize(d);
  spec.eigenvectors.resize(d, d);
  // Eigen returns ascending order; flip to descending.
  for (Eigen::Index i = 0; i < d; ++i) {
    spec.eigenvalues(i) = solver.eigenvalues()(d - 1 - i);
    spec.eigenvectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  }
  return spec;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  const HermitianSpectrum spec = hermitian_eigensystem(a - b);
  return 0.5 * spec.eigenvalues.cwiseAbs().sum();
}

Matrix matrix_sqrt_psd(const Matrix& rho) {
  const HermitianSpectrum spec = hermitian_eigensystem(rho);
  const Eigen::Index d = rho.rows();
  Eigen::VectorXd roots(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    double ev = spec.eigenvalues(i);
    if (ev < -1e-10) {
      throw numerical_error("matrix_sqrt_psd: eigenvalue " + std::to_string(ev) +
                            " below the PSD tolerance");
    }
    roots(i) = std::sqrt(std::max(ev, 0.0));
  }
  return spec.eigenvectors * roots.asDiagonal() * spec.eigenvectors.adjoint();
}

bool is_valid_density(const Matrix& rho, std::string* why) {
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (rho.rows() == 0 || rho.rows() != rho.cols()) {
    return fail("not square");
  }
  const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    return fail("Hermiticity violated by " + std::to_string(asym));
  }
  const double trace_err = std::abs(rho.trace() - Complex(1.0));
  if (trace_err > 1e-12) {
    return fail("trace deviates from 1 by " + std::to_string(trace_err));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver((rho + rho.adjoint()) / 2.0);
  const double min_ev = solver.eigenvalues().minCoeff();
  if (min_ev < -1e-10) {
    return fail("smallest eigenvalue " + std::to_string(min_ev));
  }
  if (why) why->clear();
  return true;
}

}  // namespace corrqec
