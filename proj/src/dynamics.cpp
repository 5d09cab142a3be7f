#include "isingecho/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <fmt/format.h>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace isingecho {

namespace {

// Fix the global phase of each column: first component of (numerically)
// largest magnitude made real positive.
void canonicalize_phases(Matrix& vecs) {
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    auto col = vecs.col(c);
    const double max_mag = col.cwiseAbs().maxCoeff();
    Eigen::Index pivot = 0;
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      if (std::abs(col(r)) >= max_mag * (1.0 - 1e-10)) {
        pivot = r;
        break;
      }
    }
    const Complex p = col(pivot);
    col *= std::conj(p) / std::abs(p);
  }
}

void check_info(lapack_int info, const char* routine) {
  if (info != 0) throw Error(fmt::format("{} failed with info = {}", routine, info));
}

}  // namespace

PureState SpectralDecomposition::eigenstate(std::size_t k) const {
  return PureState(n_qubits, eigenvectors.col(static_cast<Eigen::Index>(k)));
}

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition diagonalize(const HermitianOperator& h) {
  const auto n = static_cast<lapack_int>(h.dimension());
  SpectralDecomposition out;
  out.n_qubits = h.n_qubits();
  out.eigenvalues.resize(n);

  if (h.is_real()) {
    Eigen::MatrixXd a = h.matrix().real();
    check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, out.eigenvalues.data()), "dsyevd");
    out.eigenvectors = a.cast<Complex>();
  } else {
    Matrix a = h.matrix();
    check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, out.eigenvalues.data()), "zheevd");
    out.eigenvectors = std::move(a);
  }
  canonicalize_phases(out.eigenvectors);
  return out;
}

Eigen::VectorXd eigenvalues(const HermitianOperator& h) {
  const auto n = static_cast<lapack_int>(h.dimension());
  Eigen::VectorXd w(n);
  if (h.is_real()) {
    Eigen::MatrixXd a = h.matrix().real();
    check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data()), "dsyevd");
  } else {
    Matrix a = h.matrix();
    check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data()), "zheevd");
  }
  return w;
}

double gap(const ChainParams& params) {
  const Eigen::VectorXd e = eigenvalues(build_hamiltonian(params));
  if (e.size() < 2) return 0.0;
  return std::max(0.0, e(1) - e(0));
}

PureState propagate(const PureState& state, const SpectralDecomposition& spectrum, double t) {
  if (state.dimension() != spectrum.dimension()) {
    throw InputError(fmt::format("propagate: state dimension {} vs operator dimension {}", state.dimension(),
                                 spectrum.dimension()));
  }
  Vector coeffs = spectrum.eigenvectors.adjoint() * state.amplitudes();
  for (Eigen::Index a = 0; a < coeffs.size(); ++a) coeffs(a) *= std::polar(1.0, -spectrum.eigenvalues(a) * t);
  return PureState(state.n_qubits(), spectrum.eigenvectors * coeffs);
}

PureState propagate(const PureState& state, const HermitianOperator& h, double t) {
  if (state.dimension() != h.dimension()) {
    throw InputError(fmt::format("propagate: state dimension {} vs operator dimension {}", state.dimension(),
                                 h.dimension()));
  }
  if (t == 0.0) return state;
  return propagate(state, diagonalize(h), t);
}

Complex loschmidt_amplitude(const SpectralDecomposition& unperturbed, const SpectralDecomposition& perturbed,
                            const PureState& initial, double t) {
  if (unperturbed.dimension() != initial.dimension() || perturbed.dimension() != initial.dimension()) {
    throw InputError("loschmidt_amplitude: dimension mismatch");
  }
  // exp(-i H1 t)|psi> and exp(-i H0 t)|psi>; amplitude is their overlap.
  const PureState forward = propagate(initial, unperturbed, t);
  const PureState forward_perturbed = propagate(initial, perturbed, t);
  return overlap(forward_perturbed, forward);
}

double loschmidt_echo_exact(const ChainParams& params, double epsilon, double t, const PureState& initial) {
  if (initial.n_qubits() != params.n_qubits) throw InputError("loschmidt_echo_exact: qubit count mismatch");
  const auto h0 = diagonalize(build_hamiltonian(params));
  const auto h1 = diagonalize(build_hamiltonian(perturbed_params(params, epsilon)));
  return std::clamp(std::norm(loschmidt_amplitude(h0, h1, initial, t)), 0.0, 1.0);
}

std::shared_ptr<const SpectralDecomposition> SpectralCache::get(const ChainParams& params) {
  const Key key{params.n_qubits, params.b_z, params.b_x};
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  auto spectrum = std::make_shared<const SpectralDecomposition>(diagonalize(build_hamiltonian(params)));
  std::lock_guard lock(mutex_);
  return entries_.try_emplace(key, std::move(spectrum)).first->second;
}

std::size_t SpectralCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

namespace {

std::shared_ptr<const SpectralDecomposition> spectrum_of(const ChainParams& params, SpectralCache* cache) {
  if (cache) return cache->get(params);
  return std::make_shared<const SpectralDecomposition>(diagonalize(build_hamiltonian(params)));
}

}  // namespace

double loschmidt_echo_exact_ground(const ChainParams& params, double epsilon, double t, SpectralCache* cache) {
  const auto h0 = spectrum_of(params, cache);
  const auto h1 = spectrum_of(perturbed_params(params, epsilon), cache);
  return std::clamp(std::norm(loschmidt_amplitude(*h0, *h1, h0->eigenstate(0), t)), 0.0, 1.0);
}

DiagonalUnitary::DiagonalUnitary(int n_qubits, Vector phases) : n_qubits_(n_qubits), phases_(std::move(phases)) {
  check_qubit_count(n_qubits);
  if (static_cast<std::size_t>(phases_.size()) != hilbert_dimension(n_qubits)) {
    throw InputError("DiagonalUnitary: dimension mismatch");
  }
  if ((phases_.cwiseAbs().array() - 1.0).abs().maxCoeff() > 1e-12) {
    throw InputError("DiagonalUnitary: entries must have unit modulus");
  }
}

PureState DiagonalUnitary::apply(const PureState& state) const {
  if (state.n_qubits() != n_qubits_) throw InputError("DiagonalUnitary: qubit count mismatch");
  return PureState(n_qubits_, apply(state.amplitudes()));
}

Matrix DiagonalUnitary::dense() const { return phases_.asDiagonal(); }

DiagonalUnitary trotter_echo_operator(int n_qubits, double epsilon, double tau) {
  check_qubit_count(n_qubits);
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_qubits));
  Vector phases(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    phases(s) = std::polar(1.0, -tau * epsilon * total_z(static_cast<std::size_t>(s), n_qubits));
  }
  return {n_qubits, std::move(phases)};
}

Matrix exact_echo_operator(const ChainParams& params, double epsilon, double tau, SpectralCache* cache) {
  const auto h0 = spectrum_of(params, cache);
  const auto h1 = spectrum_of(perturbed_params(params, epsilon), cache);
  auto evolution = [tau](const SpectralDecomposition& s, double sign) -> Matrix {
    Vector phases(s.eigenvalues.size());
    for (Eigen::Index a = 0; a < phases.size(); ++a) phases(a) = std::polar(1.0, sign * s.eigenvalues(a) * tau);
    return s.eigenvectors * phases.asDiagonal() * s.eigenvectors.adjoint();
  };
  return evolution(*h1, +1.0) * evolution(*h0, -1.0);
}

double trotter_step_fidelity(const ChainParams& params, double epsilon, double tau, const PureState& psi,
                             SpectralCache* cache) {
  if (psi.n_qubits() != params.n_qubits) throw InputError("trotter_step_fidelity: qubit count mismatch");
  const Matrix echo = exact_echo_operator(params, epsilon, tau, cache);
  const DiagonalUnitary trot_dag = trotter_echo_operator(params.n_qubits, epsilon, tau).adjoint();
  const Vector out = trot_dag.apply(Vector(echo * psi.amplitudes()));
  return std::clamp(std::norm(psi.amplitudes().dot(out)), 0.0, 1.0);
}

double trotter_trace_fidelity(const ChainParams& params, double epsilon, double tau, SpectralCache* cache) {
  const Matrix echo = exact_echo_operator(params, epsilon, tau, cache);
  const DiagonalUnitary trot = trotter_echo_operator(params.n_qubits, epsilon, tau);
  // Tr(D^dagger M) = sum_s conj(d_s) M_ss
  const Complex tr = trot.phases().dot(echo.diagonal());
  return std::abs(tr) / static_cast<double>(echo.rows());
}

}  // namespace isingecho
