#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include <Eigen/Dense>

#include "isingecho/hamiltonian.hpp"
#include "isingecho/spin_core.hpp"

namespace isingecho {

// Ascending eigenvalues with orthonormal eigenvectors as columns. Each
// eigenvector's first largest-magnitude component is real and positive.
struct SpectralDecomposition {
  int n_qubits = 0;
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;

  std::size_t dimension() const { return static_cast<std::size_t>(eigenvalues.size()); }
  double ground_energy() const { return eigenvalues(0); }
  PureState eigenstate(std::size_t k) const;

  // sum_a E_a |a><a|
  Matrix reconstruct() const;
};

SpectralDecomposition diagonalize(const HermitianOperator& h);

// Eigenvalues only, ascending.
Eigen::VectorXd eigenvalues(const HermitianOperator& h);

// E_1 - E_0 counting degenerate levels separately (0 at a degeneracy).
double gap(const ChainParams& params);

// exp(-i H t)|state>
PureState propagate(const PureState& state, const SpectralDecomposition& spectrum, double t);
PureState propagate(const PureState& state, const HermitianOperator& h, double t);

// <psi| exp(i H1 t) exp(-i H0 t) |psi>
Complex loschmidt_amplitude(const SpectralDecomposition& unperturbed, const SpectralDecomposition& perturbed,
                            const PureState& initial, double t);

// Unperturbed H from `params`; perturbed H + epsilon V with V = -sum sz,
// i.e. the same chain at b_z - epsilon.
inline ChainParams perturbed_params(const ChainParams& params, double epsilon) {
  return {params.n_qubits, params.b_z - epsilon, params.b_x};
}

double loschmidt_echo_exact(const ChainParams& params, double epsilon, double t, const PureState& initial);

// Memoizes spectra of chain Hamiltonians. Safe for concurrent use.
class SpectralCache {
 public:
  std::shared_ptr<const SpectralDecomposition> get(const ChainParams& params);
  std::size_t size() const;

 private:
  using Key = std::tuple<int, double, double>;
  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<const SpectralDecomposition>> entries_;
};

// Exact echo with the exact ground state of H(params) as initial state.
double loschmidt_echo_exact_ground(const ChainParams& params, double epsilon, double t, SpectralCache* cache = nullptr);

// A unitary diagonal in the computational basis.
class DiagonalUnitary {
 public:
  DiagonalUnitary(int n_qubits, Vector phases);

  int n_qubits() const { return n_qubits_; }
  const Vector& phases() const { return phases_; }
  Vector apply(const Vector& v) const { return phases_.cwiseProduct(v); }
  PureState apply(const PureState& state) const;
  DiagonalUnitary adjoint() const { return {n_qubits_, phases_.conjugate()}; }
  Matrix dense() const;

 private:
  int n_qubits_;
  Vector phases_;
};

// Single-step form of U_p^dagger U: exp(-i tau epsilon sum_i sz_i).
DiagonalUnitary trotter_echo_operator(int n_qubits, double epsilon, double tau);

// Dense U_p^dagger U = exp(i tau (H + eps V)) exp(-i tau H).
Matrix exact_echo_operator(const ChainParams& params, double epsilon, double tau, SpectralCache* cache = nullptr);

// |<psi| U_trot^dagger U_p^dagger U |psi>|^2
double trotter_step_fidelity(const ChainParams& params, double epsilon, double tau, const PureState& psi,
                             SpectralCache* cache = nullptr);

// |Tr(U_trot^dagger U_p^dagger U)| / 2^N, a state-independent companion figure.
double trotter_trace_fidelity(const ChainParams& params, double epsilon, double tau, SpectralCache* cache = nullptr);

}  // namespace isingecho
