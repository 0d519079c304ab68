#include <doctest.h>

#include "smoothdiv/operators.hpp"
#include "smoothdiv/operators_io.hpp"

using namespace smoothdiv;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Matrix ket_bra(int i, int dim) {
  Matrix m = Matrix::Zero(dim, dim);
  m(i, i) = 1.0;
  return m;
}

} // namespace

TEST_CASE("make_density validates kind and trace") {
  CHECK(make_density(Matrix::Identity(2, 2) / 2.0, StateKind::normalized).trace() ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(make_density(diag2(0.6, 0.5), StateKind::normalized), TraceViolation);
  DensityOperator sub = make_density(diag2(0.3, 0.3), StateKind::subnormalized);
  CHECK(sub.trace() == doctest::Approx(0.6));
  CHECK_THROWS_AS(make_density(diag2(0.9, -0.1), StateKind::subnormalized), NotPSD);
  Matrix asym = Matrix::Zero(2, 2);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(HermitianOperator{asym}, NotHermitian);
}

TEST_CASE("fidelity on known pairs") {
  CHECK(fidelity(ket_bra(0, 2), Matrix(Matrix::Identity(2, 2) / 2.0)) == doctest::Approx(0.5));
  // Bhattacharyya on diagonals: (sqrt(.45)+sqrt(.05))^2 = 0.8
  CHECK(fidelity(diag2(0.5, 0.5), diag2(0.9, 0.1)) == doctest::Approx(0.8).epsilon(1e-10));
  DensityOperator rho = random_state(3, 3);
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));
  DensityOperator sub = make_density(diag2(0.3, 0.3), StateKind::subnormalized);
  CHECK(fidelity(sub, sub) == doctest::Approx(0.36).epsilon(1e-10)); // trace(rho)^2
  CHECK_THROWS_AS(fidelity(diag2(1, 0), Matrix(Matrix::Identity(3, 3))), DimensionMismatch);
}

TEST_CASE("apply_channel basics") {
  Rng rng(11);
  DensityOperator rho = random_state(rng, 2);
  QuantumChannel id({Matrix::Identity(2, 2)});
  CHECK((apply_channel(id, rho.matrix()) - rho.matrix()).norm() == doctest::Approx(0.0));

  // replacer channel N(X) = Tr[X] omega via Kraus |i><j| sqrt(omega_eigs)
  DensityOperator omega = random_state(rng, 2);
  Eigen::SelfAdjointEigenSolver<Matrix> es(omega.matrix());
  std::vector<Matrix> kraus;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Matrix k = Matrix::Zero(2, 2);
      k.col(j) = std::sqrt(std::max(es.eigenvalues()(i), 0.0)) * es.eigenvectors().col(i);
      kraus.push_back(k);
    }
  QuantumChannel replacer(kraus);
  CHECK((apply_channel(replacer, rho.matrix()) - omega.matrix()).norm() < 1e-10);

  // dephaser kills off-diagonals
  QuantumChannel dephase({ket_bra(0, 2), ket_bra(1, 2)});
  Matrix coh = Matrix::Zero(2, 2);
  coh(0, 1) = 1.0;
  coh(1, 0) = 1.0;
  CHECK(apply_channel(dephase, coh).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("partial trace marginals") {
  Rng rng(5);
  DensityOperator rho = random_state(rng, 2);
  DensityOperator tau = random_state(rng, 3);
  Matrix joint = tensor(rho.matrix(), tau.matrix());
  BipartiteLabel label(2, 3);
  // Tr_B[rho x tau] = trace(tau) rho, and tau is a state here
  CHECK((partial_trace(joint, label, Subsystem::A) - rho.matrix()).norm() < 1e-12);
  CHECK((partial_trace(joint, label, Subsystem::B) - tau.matrix()).norm() < 1e-12);

  // maximally entangled qubit pair has uniform marginals
  Matrix phi = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) phi(i * 2 + i, j * 2 + j) = 0.5;
  CHECK((partial_trace(phi, BipartiteLabel(2, 2), Subsystem::A) - Matrix::Identity(2, 2) / 2.0).norm() <
        1e-12);
  CHECK_THROWS_AS(partial_trace(joint, BipartiteLabel(4, 2), Subsystem::A), BadFactorization);
}

TEST_CASE("matrix functions act in the eigenbasis") {
  CHECK((matrix_sqrt(diag2(4, 9)) - diag2(2, 3)).norm() < 1e-12);
  Matrix l = matrix_log2_on_support(diag2(0.5, 0.0));
  CHECK(l(0, 0).real() == doctest::Approx(-1.0));
  CHECK(std::abs(l(1, 1)) < 1e-14); // support mask
  CHECK((matrix_power(Matrix(diag2(0.25, 0.25)), 0.5) - diag2(0.5, 0.5)).norm() < 1e-12);
  CHECK_THROWS_AS(matrix_sqrt(diag2(1.0, -0.5)), NegativeEigenvalue);
}

TEST_CASE("random instances are deterministic and valid") {
  CHECK((random_state(7, 2).matrix() - random_state(7, 2).matrix()).norm() == 0.0);
  Rng rng(19);
  QuantumChannel n = random_channel(rng, 3, 2);
  DensityOperator rho = random_state(rng, 3);
  DensityOperator out = apply_channel(n, rho);
  CHECK(out.trace() == doctest::Approx(1.0));
  Matrix w = random_psd(rng, 4);
  Eigen::SelfAdjointEigenSolver<Matrix> es(w, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("fidelity data processing and multiplicativity") {
  Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + static_cast<int>(trial % 3);
    DensityOperator rho = random_state(rng, d);
    DensityOperator sig = random_state(rng, d);
    QuantumChannel n = random_channel(rng, d, 2);
    const double before = fidelity(rho, sig);
    const double after = fidelity(apply_channel(n, rho.matrix()), apply_channel(n, sig.matrix()));
    CHECK(after >= before - 1e-9);
  }
  for (int trial = 0; trial < 40; ++trial) {
    DensityOperator r1 = random_state(rng, 2), r2 = random_state(rng, 2);
    DensityOperator s1 = random_state(rng, 2), s2 = random_state(rng, 2);
    const double lhs = fidelity(tensor(r1.matrix(), r2.matrix()), tensor(s1.matrix(), s2.matrix()));
    const double rhs = fidelity(r1, s1) * fidelity(r2, s2);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("fidelity overlap with a pure ancilla factors out") {
  // F(omega_SE, sigma_S x |0><0|) = F(<0|omega|0>, sigma_S)
  Rng rng(303);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix omega = random_psd(rng, 4);
    Matrix sigma = random_psd(rng, 2);
    BipartiteLabel label(2, 2); // S-major indexing, E is the fast index
    Matrix anc = tensor(sigma, ket_bra(0, 2));
    Matrix overlap(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) overlap(i, j) = omega(i * 2 + 0, j * 2 + 0);
    CHECK(fidelity(omega, anc) == doctest::Approx(fidelity(overlap, sigma)).epsilon(1e-9));
  }
}

TEST_CASE("gentle measurement and flip identities") {
  Rng rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + (trial % 2);
    DensityOperator rho = random_state(rng, d);
    DensityOperator sig = random_state(rng, d);
    // random measurement operator 0 <= L <= I
    Matrix raw = random_psd(rng, d);
    Eigen::SelfAdjointEigenSolver<Matrix> es(raw);
    RealVector ev = es.eigenvalues();
    for (int i = 0; i < d; ++i) ev(i) = std::min(std::max(ev(i), 0.0), 1.0);
    Matrix lam = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    Matrix rl = matrix_sqrt(lam);
    const double prob = (lam * rho.matrix()).trace().real();
    if (prob < 1e-6) continue;
    Matrix post = rl * rho.matrix() * rl / prob;
    CHECK(fidelity(post, rho.matrix()) >= prob - 1e-9);
    const double lhs = fidelity(post, sig.matrix());
    const double rhs = fidelity(rho.matrix(), Matrix(rl * sig.matrix() * rl)) / prob;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("operator JSON round trip and errors") {
  Rng rng(77);
  Matrix m = random_psd(rng, 3);
  const std::string path = "/tmp/smoothdiv_test_op.json";
  save_operator_json(path, m);
  CHECK((load_operator_json(path) - m).norm() < 1e-14);

  CHECK_THROWS_AS(operator_from_json_string("{\"dim\": 2}"), ParseError);
  CHECK_THROWS_AS(operator_from_json_string("{\"re\": [[1,0],[0]]}"), ParseError);
  CHECK_THROWS_AS(operator_from_json_string("{\"dim\": 3, \"re\": [[1,0],[0,1]]}"), ParseError);
  CHECK_THROWS_AS(operator_from_json_string("not json"), ParseError);

  QuantumChannel n = random_channel(rng, 2, 3);
  const std::string cpath = "/tmp/smoothdiv_test_chan.json";
  save_channel_json(cpath, n);
  QuantumChannel loaded = load_channel_json(cpath);
  DensityOperator rho = random_state(rng, 2);
  CHECK((apply_channel(loaded, rho.matrix()) - apply_channel(n, rho.matrix())).norm() < 1e-12);
}
