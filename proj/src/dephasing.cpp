#include "corrqec/dephasing.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <utility>

namespace corrqec {

namespace {

void require_symmetric(const Eigen::MatrixXd& m, const char* name) {
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    throw std::invalid_argument(std::string("BathSpec: ") + name +
                                " deviates from symmetric by " + std::to_string(asym));
  }
}

void require_time(double t, const char* who) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument(std::string(who) + ": time " + std::to_string(t) +
                                " must be >= 0");
  }
}

unsigned check_basis_index(unsigned a, int n, const char* who) {
  if (a >= (1u << n)) {
    throw std::invalid_argument(std::string(who) + ": basis index " + std::to_string(a) +
                                " outside a " + std::to_string(n) + "-qubit register");
  }
  return a;
}

}  // namespace

BathSpec::BathSpec(int n, Eigen::MatrixXd gamma_rate_in, Eigen::MatrixXd v_in,
                   std::function<double(double)> profile)
    : n_physical(n),
      gamma_rate(std::move(gamma_rate_in)),
      v_coupling(std::move(v_in)),
      gamma_profile(std::move(profile)) {
  if (n < 1) {
    throw std::invalid_argument("BathSpec: need at least one qubit");
  }
  if (gamma_rate.rows() != n || gamma_rate.cols() != n ||
      v_coupling.rows() != n || v_coupling.cols() != n) {
    throw std::invalid_argument("BathSpec: rate matrices must be n x n");
  }
  require_symmetric(gamma_rate, "gamma_rate");
  require_symmetric(v_coupling, "v_coupling");
  // Gdot must be PSD or the damping exponent could turn negative (gain).
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gamma_rate);
  if (solver.eigenvalues().minCoeff() < -1e-12) {
    throw std::invalid_argument("BathSpec: gamma_rate is not positive semidefinite (min eig " +
                                std::to_string(solver.eigenvalues().minCoeff()) + ")");
  }
  if (!gamma_profile) {
    gamma_profile = [](double t) { return t; };
  }
}

BathSpec BathSpec::uniform(int n, double v, double gamma_dot) {
  Eigen::MatrixXd gd = Eigen::MatrixXd::Constant(n, n, gamma_dot);
  Eigen::MatrixXd vm = Eigen::MatrixXd::Constant(n, n, v);
  vm.diagonal().setZero();
  return BathSpec(n, std::move(gd), std::move(vm));
}

Eigen::MatrixXd BathSpec::gamma_at(double t) const {
  require_time(t, "BathSpec::gamma_at");
  return gamma_rate * gamma_profile(t);
}

double damping_exponent(unsigned a, unsigned b, const BathSpec& bath, double t) {
  const int n = bath.n_physical;
  check_basis_index(a, n, "damping_exponent");
  check_basis_index(b, n, "damping_exponent");
  require_time(t, "damping_exponent");
  if (a == b) return 0.0;

  const Eigen::MatrixXd gamma = bath.gamma_at(t);
  Eigen::VectorXd d(n);
  for (int j = 0; j < n; ++j) {
    d(j) = sz_of_bit(b, j, n) - sz_of_bit(a, j, n);
  }
  // d^T Gamma d over all ordered pairs; >= 0 because Gamma is PSD.
  return d.dot(gamma * d);
}

double coupling_phase(unsigned a, unsigned b, const BathSpec& bath, double t) {
  const int n = bath.n_physical;
  check_basis_index(a, n, "coupling_phase");
  check_basis_index(b, n, "coupling_phase");
  require_time(t, "coupling_phase");
  if (a == b) return 0.0;

  double zz = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int jp = j + 1; jp < n; ++jp) {
      const int pa = sz_of_bit(a, j, n) * sz_of_bit(a, jp, n);
      const int pb = sz_of_bit(b, j, n) * sz_of_bit(b, jp, n);
      zz += bath.v_coupling(j, jp) * (pa - pb);
    }
  }
  return t * zz;
}

Matrix evolution_factors(const BathSpec& bath, double t) {
  require_time(t, "evolution_factors");
  const int n = bath.n_physical;
  const unsigned dim = 1u << n;
  const Eigen::MatrixXd gamma = bath.gamma_at(t);

  // Per-basis-state spin vectors and ZZ phase sums; the pairwise tables then
  // come out of quadratic forms instead of re-walking bits per element.
  Eigen::MatrixXd spins(dim, n);
  Eigen::VectorXd zz(dim);
  for (unsigned x = 0; x < dim; ++x) {
    for (int j = 0; j < n; ++j) spins(x, j) = sz_of_bit(x, j, n);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int jp = j + 1; jp < n; ++jp) {
        acc += bath.v_coupling(j, jp) * spins(x, j) * spins(x, jp);
      }
    }
    zz(x) = acc;
  }
  // E(a,b) = (s_b - s_a)^T Gamma (s_b - s_a) = q_a + q_b - 2 s_a.Gamma.s_b
  const Eigen::MatrixXd gs = spins * gamma * spins.transpose();

  Matrix factors(dim, dim);
  for (unsigned aa = 0; aa < dim; ++aa) {
    for (unsigned bb = 0; bb < dim; ++bb) {
      const double e = gs(aa, aa) + gs(bb, bb) - 2.0 * gs(aa, bb);
      const double phi = t * (zz(aa) - zz(bb));
      factors(aa, bb) = std::exp(-e) * Complex(std::cos(phi), std::sin(phi));
    }
  }
  return factors;
}

Matrix evolve(const Matrix& rho, const BathSpec& bath, double t) {
  if (rho.rows() != rho.cols() || rho.rows() != (Eigen::Index{1} << bath.n_physical)) {
    throw std::invalid_argument("evolve: state dimension does not match the bath register");
  }
  return evolve_with_factors(rho, evolution_factors(bath, t));
}

Matrix evolve_with_factors(const Matrix& rho, const Matrix& factors) {
  if (rho.rows() != factors.rows() || rho.cols() != factors.cols() ||
      rho.rows() != rho.cols()) {
    throw std::invalid_argument("evolve_with_factors: factor table/state dimension mismatch");
  }
  return rho.cwiseProduct(factors);
}

}  // namespace corrqec
