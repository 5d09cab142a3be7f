#include <cmath>
#include <numbers>
#include <thread>

#include "doctest.h"
#include "isingecho/dynamics.hpp"
#include "support.hpp"

using namespace isingecho;
using testsupport::max_abs;

namespace {

// |<psi| exp(i H1 t) exp(-i H0 t) |psi>|^2 through scaling-and-squaring exponentials.
double echo_oracle(const ChainParams& p, double eps, double t, const Vector& psi) {
  const Matrix h0 = build_hamiltonian(p).matrix();
  const Matrix h1 = h0 + eps * echo_perturbation(p.n_qubits).matrix();
  const Vector forward = testsupport::expm_evolution(h0, t) * psi;
  const Vector back = testsupport::expm_evolution(h1, -t) * forward;
  return std::norm(psi.dot(back));
}

HermitianOperator sigma_x() {
  const std::vector<PauliTerm> t{{1.0, {Pauli::X}}};
  return HermitianOperator::from_pauli_sum(1, t);
}

HermitianOperator sigma_z() {
  const std::vector<PauliTerm> t{{1.0, {Pauli::Z}}};
  return HermitianOperator::from_pauli_sum(1, t);
}

}  // namespace

TEST_CASE("diagonalize examples") {
  Matrix d = Matrix::Zero(4, 4);
  d.diagonal() << 1, -1, -1, 1;
  const SpectralDecomposition s = diagonalize(HermitianOperator(2, d));
  CHECK(max_abs(s.eigenvalues.cast<Complex>() - Vector(Eigen::Vector4cd(-1, -1, 1, 1))) < 1e-14);

  const SpectralDecomposition x = diagonalize(sigma_x());
  CHECK(x.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(x.eigenvalues(1) == doctest::Approx(1.0));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(x.eigenvectors(0, 0) - Complex(r)) < 1e-14);
  CHECK(std::abs(x.eigenvectors(1, 0) - Complex(-r)) < 1e-14);
  CHECK(std::abs(x.eigenvectors(0, 1) - Complex(r)) < 1e-14);
  CHECK(std::abs(x.eigenvectors(1, 1) - Complex(r)) < 1e-14);

  CHECK(diagonalize(build_hamiltonian({3, 0.0, 0.0})).ground_energy() == doctest::Approx(-2.0));
}

TEST_CASE("spectral decompositions reconstruct H and are orthonormal (property)") {
  auto g = testsupport::rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = testsupport::uniform_int(g, 1, 5);
    const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n));
    const bool real = trial % 2 == 0;
    Matrix m = testsupport::random_hermitian(g, dim);
    if (real) m = m.real().cast<Complex>();
    const HermitianOperator h(n, m);
    const SpectralDecomposition s = diagonalize(h);
    REQUIRE(max_abs(s.reconstruct() - h.matrix()) <= 1e-10 * max_abs(h.matrix()));
    REQUIRE(max_abs(s.eigenvectors.adjoint() * s.eigenvectors - Matrix::Identity(dim, dim)) <= 1e-10);
    for (Eigen::Index a = 1; a < dim; ++a) REQUIRE(s.eigenvalues(a) >= s.eigenvalues(a - 1));
    for (Eigen::Index a = 0; a < dim; ++a) {
      const Vector col = s.eigenvectors.col(a);
      const double top = col.cwiseAbs().maxCoeff();
      Eigen::Index k = 0;
      while (std::abs(col(k)) < top * (1.0 - 1e-10)) ++k;
      REQUIRE(std::abs(col(k).imag()) < 1e-12);
      REQUIRE(col(k).real() > 0.0);
    }
  }
}

TEST_CASE("gap examples") {
  CHECK(gap({3, -2.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(gap({1, 0.0, 0.7}) == doctest::Approx(1.4));
  CHECK(gap({1, 0.0, -0.7}) == doctest::Approx(1.4));

  double best = 1e9, where = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double bz = -3.0 + 0.01 * i;
    const double g = gap({7, bz, 0.1});
    CHECK(g > 0.0);
    if (g < best) {
      best = g;
      where = bz;
    }
  }
  CHECK(std::abs(where + 2.0) <= 0.05);
}

TEST_CASE("propagate examples") {
  auto g = testsupport::rng(22);
  const PureState psi = testsupport::random_state(g, 3);
  const HermitianOperator h = build_hamiltonian({3, 0.4, 0.3});
  CHECK(fidelity(propagate(psi, h, 0.0), psi) == doctest::Approx(1.0).epsilon(1e-14));

  const PureState zero = basis_state(1, "0");
  const PureState z = propagate(zero, sigma_z(), 0.9);
  CHECK(std::abs(z[0] - std::exp(Complex(0.0, -0.9))) < 1e-14);

  const PureState plus = PureState::normalized(1, Eigen::Vector2cd(1.0, 1.0));
  CHECK(fidelity(propagate(plus, sigma_z(), std::numbers::pi / 2), plus) < 1e-15);
}

TEST_CASE("propagate matches the matrix exponential, is unitary and composes (property)") {
  auto g = testsupport::rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = testsupport::uniform_int(g, 1, 4);
    const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n));
    const HermitianOperator h(n, testsupport::random_hermitian(g, dim));
    const PureState psi = testsupport::random_state(g, n);
    const double t1 = testsupport::uniform(g, -3.0, 3.0);
    const double t2 = testsupport::uniform(g, -3.0, 3.0);
    const PureState a = propagate(psi, h, t1);
    REQUIRE(std::abs(a.amplitudes().norm() - 1.0) <= 1e-12);
    REQUIRE((a.amplitudes() - testsupport::expm_evolution(h.matrix(), t1) * psi.amplitudes()).norm() < 1e-10);
    const PureState ab = propagate(a, h, t2);
    REQUIRE(1.0 - fidelity(ab, propagate(psi, h, t1 + t2)) <= 1e-10);
  }
  CHECK_THROWS_AS(propagate(basis_state(1, "0"), build_hamiltonian({2, 0.0, 0.0}), 1.0), InputError);
}

TEST_CASE("loschmidt_echo_exact examples") {
  auto g = testsupport::rng(24);
  const ChainParams p{4, -0.7, 0.2};
  const PureState ground = diagonalize(build_hamiltonian(p)).eigenstate(0);
  CHECK(loschmidt_echo_exact(p, 0.0, 2.3, ground) == doctest::Approx(1.0).epsilon(1e-12));
  const PureState psi = testsupport::random_state(g, 4);
  CHECK(loschmidt_echo_exact(p, 0.4, 0.0, psi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(loschmidt_echo_exact_ground(p, 0.0, 5.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact echo matches a matrix-exponential oracle (property)") {
  auto g = testsupport::rng(25);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = testsupport::uniform_int(g, 1, 5);
    const ChainParams p{n, testsupport::uniform(g, -3, 3), testsupport::uniform(g, -1, 1)};
    const double eps = testsupport::uniform(g, -0.5, 0.5);
    const double t = testsupport::uniform(g, 0.0, 4.0);
    const PureState psi = testsupport::random_state(g, n);
    const double l = loschmidt_echo_exact(p, eps, t, psi);
    REQUIRE(l >= -1e-12);
    REQUIRE(l <= 1.0 + 1e-12);
    REQUIRE(l == doctest::Approx(echo_oracle(p, eps, t, psi.amplitudes())).epsilon(1e-9));
  }
}

TEST_CASE("echo symmetry L(B_z, eps) = L(-B_z, -eps) for exact ground states (property)") {
  auto g = testsupport::rng(26);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = testsupport::uniform_int(g, 1, 6);
    const double bz = testsupport::uniform(g, -3, 3);
    const double bx = testsupport::uniform(g, 0.05, 1.0);
    const double eps = testsupport::uniform(g, -0.5, 0.5);
    const double t = testsupport::uniform(g, 0.0, 5.0);
    const double a = loschmidt_echo_exact_ground({n, bz, bx}, eps, t);
    const double b = loschmidt_echo_exact_ground({n, -bz, bx}, -eps, t);
    REQUIRE(std::abs(a - b) <= 1e-10);
  }
}

TEST_CASE("closed-form ground states do not decay at B_x = 0") {
  for (int n : {3, 4, 5, 6}) {
    for (double bz : {-2.5, -1.5, -0.5, 0.5, 1.5, 2.5}) {
      for (const PureState& s : closed_form_ground({n, bz, 0.0})) {
        for (double t : {0.5, 3.0, 11.0}) {
          CHECK(loschmidt_echo_exact({n, bz, 0.0}, 0.3, t, s) == doctest::Approx(1.0).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("spectral cache") {
  SpectralCache cache;
  const auto a = cache.get({4, 0.5, 0.1});
  const auto b = cache.get({4, 0.5, 0.1});
  CHECK(a.get() == b.get());
  cache.get({4, 0.6, 0.1});
  CHECK(cache.size() == 2);

  std::vector<std::jthread> workers;
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([&cache, w] {
      for (int i = 0; i < 10; ++i) cache.get({3, 0.1 * i, 0.1 * (w % 2)});
    });
  }
  workers.clear();
  CHECK(cache.size() == 22);
}

TEST_CASE("trotter_echo_operator examples") {
  const DiagonalUnitary id = trotter_echo_operator(3, 0.0, 2.0);
  CHECK(max_abs(id.dense() - Matrix::Identity(8, 8)) < 1e-15);

  const DiagonalUnitary one = trotter_echo_operator(1, 0.3, 1.7);
  CHECK(std::abs(one.phases()(0) - std::exp(Complex(0.0, -0.51))) < 1e-15);
  CHECK(std::abs(one.phases()(1) - std::exp(Complex(0.0, 0.51))) < 1e-15);

  const Matrix sum = testsupport::pauli_dense({Pauli::Z, Pauli::I, Pauli::I}) +
                     testsupport::pauli_dense({Pauli::I, Pauli::Z, Pauli::I}) +
                     testsupport::pauli_dense({Pauli::I, Pauli::I, Pauli::Z});
  CHECK(max_abs(trotter_echo_operator(3, 0.2, std::numbers::pi).dense() -
                testsupport::expm_evolution(sum, 0.2 * std::numbers::pi)) < 1e-13);
}

TEST_CASE("exact echo operator matches the exponential product") {
  const ChainParams p{3, -1.3, 0.1};
  const Matrix h0 = build_hamiltonian(p).matrix();
  const Matrix h1 = h0 + 0.2 * echo_perturbation(3).matrix();
  const Matrix expected = testsupport::expm_evolution(h1, -2.0) * testsupport::expm_evolution(h0, 2.0);
  CHECK(max_abs(exact_echo_operator(p, 0.2, 2.0) - expected) < 1e-10);
}

// Single-step fidelity at the N=3 crossover, measured against the same
// exponential product; 0.98 is not reached there.
TEST_CASE("single Trotter step fidelity at N = 3, B_z = -2") {
  const ChainParams p{3, -2.0, 0.1};
  const PureState psi = diagonalize(build_hamiltonian(p)).eigenstate(0);
  const double tau = std::numbers::pi, eps = 0.2;
  const Matrix h0 = build_hamiltonian(p).matrix();
  const Matrix h1 = h0 + eps * echo_perturbation(3).matrix();
  const Matrix exact = testsupport::expm_evolution(h1, -tau) * testsupport::expm_evolution(h0, tau);
  const Vector step = trotter_echo_operator(3, eps, tau).adjoint().apply(exact * psi.amplitudes());
  const double oracle = std::norm(psi.amplitudes().dot(step));
  const double f = trotter_step_fidelity(p, eps, tau, psi);
  CHECK(f == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(f == doctest::Approx(0.9686).epsilon(5e-4));
  CHECK(trotter_trace_fidelity(p, eps, tau) >= 0.98);
}
