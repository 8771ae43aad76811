#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "common.hpp"
#include "corrqec/channel.hpp"
#include "corrqec/concurrence.hpp"
#include "corrqec/qec3.hpp"

using namespace corrqec;
using testutil::Rng;

namespace {

Matrix pauli_z_on(int j, int n) {
  Matrix z = Matrix::Identity(2, 2);
  z(1, 1) = -1.0;
  Matrix out = tensor(Matrix::Identity(Eigen::Index{1} << j, Eigen::Index{1} << j), z);
  const Eigen::Index rest = Eigen::Index{1} << (n - 1 - j);
  return tensor(out, Matrix::Identity(rest, rest));
}

Vector logical_bell() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = std::sqrt(0.5);
  return v;
}

Matrix choi_of_kraus(const std::vector<Matrix>& kraus, Eigen::Index d) {
  Matrix choi = Matrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Matrix unit = Matrix::Zero(d, d);
      unit(i, j) = 1.0;
      Matrix mapped = Matrix::Zero(d, d);
      for (const Matrix& k : kraus) mapped += k * unit * k.adjoint();
      choi.block(i * d, j * d, d, d) = mapped;
    }
  }
  return choi;
}

}  // namespace

TEST_CASE("layout validation") {
  CHECK_NOTHROW(CodeLayout::standard().validate());
  CHECK(CodeLayout::standard().n_physical() == 6);

  CodeLayout overlap;
  overlap.blocks = {{0, 1, 2}, {2, 3, 4}};
  CHECK_THROWS_AS(overlap.validate(), std::invalid_argument);

  CodeLayout out_of_range;
  out_of_range.blocks = {{0, 1, 6}};
  CHECK_THROWS_AS(out_of_range.validate(), std::invalid_argument);
}

TEST_CASE("encoding isometry structure") {
  const Code& code = default_code();
  const Matrix& w = code.isometry();
  CHECK(w.rows() == 64);
  CHECK(w.cols() == 4);
  CHECK((w.adjoint() * w - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

  // Column 0 is |+++>|+++>: every amplitude +1/8.
  for (int p = 0; p < 64; ++p) {
    CHECK(std::abs(w(p, 0) - Complex(0.125)) < 1e-14);
  }
  // Column 3 is |--->|--->: amplitude signs follow bit parity.
  for (int p = 0; p < 64; ++p) {
    const int parity = __builtin_popcount(static_cast<unsigned>(p)) & 1;
    CHECK(std::abs(w(p, 3) - Complex(parity ? -0.125 : 0.125)) < 1e-14);
  }
}

TEST_CASE("encode reference states") {
  Vector e00 = Vector::Zero(4);
  e00(0) = 1.0;
  const Matrix enc = encode(density_from_pure(e00));
  // |000>_x|000>_x projector: uniformly 1/64.
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) CHECK(std::abs(enc(i, j) - Complex(1.0 / 64)) < 1e-14);

  const Matrix enc_bell = encode(density_from_pure(logical_bell()));
  const HermitianSpectrum spec = hermitian_eigensystem(enc_bell);
  CHECK(spec.eigenvalues(0) == doctest::Approx(1.0));  // rank 1
  CHECK(spec.eigenvalues(1) == doctest::Approx(0.0));
  CHECK(concurrence(decode(enc_bell)) == doctest::Approx(1.0).epsilon(1e-10));

  const Matrix enc_mixed = encode(Matrix::Identity(4, 4) / 4.0);
  CHECK(std::abs(enc_mixed.trace() - Complex(1.0)) < 1e-14);
  CHECK_THROWS_AS(encode(Matrix::Identity(2, 2) / 2.0), std::invalid_argument);
}

TEST_CASE("recover leaves code-space states unchanged") {
  Rng rng(401);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix enc = encode(testutil::random_density(rng, 4));
    CHECK((recover(enc) - enc).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("every single phase error is corrected exactly") {
  Rng rng(409);
  for (int j = 0; j < 6; ++j) {
    const Matrix z = pauli_z_on(j, 6);
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix rho_l = testutil::random_density(rng, 4);
      const Matrix corrupted = z * encode(rho_l) * z.adjoint();
      const Matrix fixed = decode(recover(corrupted));
      CHECK((fixed - rho_l).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("two errors in one block land on the logical flip") {
  Vector e00 = Vector::Zero(4), e10 = Vector::Zero(4);
  e00(0) = 1.0;
  e10(2) = 1.0;  // |1~0~>
  const Matrix z0z1 = pauli_z_on(0, 6) * pauli_z_on(1, 6);
  const Matrix corrupted = z0z1 * encode(density_from_pure(e00)) * z0z1.adjoint();
  const Matrix result = decode(recover(corrupted));
  CHECK((result - density_from_pure(e10)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("decode round trip, correction pipeline, and leakage guard") {
  Rng rng(419);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix rho_l = testutil::random_density(rng, 4);
    double leak = -1.0;
    const Matrix back = decode(encode(rho_l), &leak);
    CHECK((back - rho_l).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(leak) < 1e-12);
  }

  const Matrix z4 = pauli_z_on(3, 6);  // fourth physical qubit
  const Matrix bell_enc = encode(density_from_pure(logical_bell()));
  const Matrix fixed = decode(recover(z4 * bell_enc * z4.adjoint()));
  CHECK((fixed - density_from_pure(logical_bell())).cwiseAbs().maxCoeff() < 1e-12);

  const Matrix mixed_code = encode(Matrix::Identity(4, 4) / 4.0);
  CHECK((decode(mixed_code) - Matrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-13);

  // A z-basis product state sits mostly outside the code space.
  Matrix outside = Matrix::Zero(64, 64);
  outside(0, 0) = 1.0;
  CHECK_THROWS_AS(decode(outside), numerical_error);
}

TEST_CASE("recovery channel is CPTP, complete, and idempotent") {
  // Per-block CPTP via the Choi matrix of the three-qubit block channel.
  CodeLayout single;
  single.blocks = {{0, 1, 2}};
  const Code block_code(single);
  const auto& kraus = block_code.recovery_kraus()[0];
  CHECK(kraus.size() == 4);

  Matrix completeness = Matrix::Zero(8, 8);
  for (const Matrix& k : kraus) completeness += k.adjoint() * k;
  CHECK((completeness - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-13);

  double psd = 0.0, tp = 0.0;
  CHECK(is_cptp(choi_of_kraus(kraus, 8), &psd, &tp));
  CHECK(psd > -1e-10);
  CHECK(tp < 1e-10);

  Rng rng(431);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix rho = testutil::random_density(rng, 64, 6);
    const Matrix once = recover(rho);
    CHECK(std::abs(once.trace() - rho.trace()) < 1e-12);
    CHECK((recover(once) - once).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("qec_cycle: T=0 identity and small-T freezing") {
  const BathSpec bath = BathSpec::uniform(6, 1.0, 0.1);
  Rng rng(433);
  const Matrix enc = encode(testutil::random_density(rng, 4));
  CHECK((qec_cycle(enc, bath, 0.0) - enc).cwiseAbs().maxCoeff() < 1e-13);

  // Logical x-basis products are frozen by rapid correction.
  Vector xbasis(4);
  xbasis << 0.5, -0.5, 0.5, -0.5;  // |0~1~>_x pattern
  const Matrix frozen0 = encode(density_from_pure(xbasis));
  Matrix state = frozen0;
  for (int k = 0; k < 20; ++k) state = qec_cycle(state, bath, 0.01);
  CHECK(trace_distance(decode(state), decode(frozen0)) < 1e-6);
}

TEST_CASE("undamped cycles at T=pi/4V: two flip, four return") {
  const BathSpec bath(6, Eigen::MatrixXd::Zero(6, 6),
                      BathSpec::uniform(6, 1.0, 0.0).v_coupling);
  const double T = std::numbers::pi / 4.0;

  Vector e00 = Vector::Zero(4), e11 = Vector::Zero(4);
  e00(0) = 1.0;
  e11(3) = 1.0;
  Matrix state = encode(density_from_pure(e00));
  state = qec_cycle(state, bath, T);
  state = qec_cycle(state, bath, T);
  CHECK((state - encode(density_from_pure(e11))).cwiseAbs().maxCoeff() < 1e-9);

  Rng rng(439);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix rho_l = testutil::random_density(rng, 4);
    Matrix s = encode(rho_l);
    for (int k = 0; k < 4; ++k) s = qec_cycle(s, bath, T);
    CHECK((decode(s) - rho_l).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("a permuted layout still corrects single errors") {
  CodeLayout permuted;
  permuted.blocks = {{5, 1, 3}, {0, 4, 2}};
  const Code code(permuted);
  Rng rng(443);
  for (int j = 0; j < 6; ++j) {
    const Matrix z = pauli_z_on(j, 6);
    const Matrix rho_l = testutil::random_density(rng, 4);
    const Matrix corrupted = z * code.encode(rho_l) * z.adjoint();
    CHECK((code.decode(code.recover(corrupted)) - rho_l).cwiseAbs().maxCoeff() < 1e-12);
  }
}
