#include "isingecho/hamiltonian.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace isingecho {

namespace {

void require_closed_form_size(int n_qubits) {
  if (n_qubits < 1) throw InputError(fmt::format("invalid chain size {}", n_qubits));
  if (n_qubits < 3) {
    throw UnsupportedError(fmt::format("closed forms need odd N >= 3 or even N >= 4, got N = {}", n_qubits));
  }
}

std::string repeat(std::string_view unit, int times) {
  std::string s;
  for (int i = 0; i < times; ++i) s += unit;
  return s;
}

// Kets making up each phase (one bit string, or two forming a symmetric
// superposition).
std::vector<std::string> phase_kets(int n, int k) {
  if (parity_of(n) == Parity::Odd) {
    const int pairs = (n - 1) / 2;
    switch (k) {
      case 1: return {std::string(static_cast<std::size_t>(n), '0')};
      case 2: return {repeat("01", pairs) + "0"};
      case 3: return {repeat("10", pairs) + "1"};
      case 4: return {std::string(static_cast<std::size_t>(n), '1')};
      default: break;
    }
  } else {
    const int pairs = (n - 2) / 2;
    switch (k) {
      case 1: return {std::string(static_cast<std::size_t>(n), '0')};
      case 2: return {repeat("01", pairs) + "00", "00" + repeat("10", pairs)};
      case 3: return {repeat("01", n / 2), repeat("10", n / 2)};
      case 4: return {"11" + repeat("01", pairs), repeat("10", pairs) + "11"};
      case 5: return {std::string(static_cast<std::size_t>(n), '1')};
      default: break;
    }
  }
  throw InputError(fmt::format("phase index {} out of range for N = {}", k, n));
}

}  // namespace

void ChainParams::validate() const {
  check_qubit_count(n_qubits);
  if (!std::isfinite(b_z) || !std::isfinite(b_x)) throw InputError("ChainParams: fields must be finite");
}

HermitianOperator build_hamiltonian(const ChainParams& params) {
  params.validate();
  const int n = params.n_qubits;
  std::vector<PauliTerm> terms;
  for (int i = 1; i < n; ++i) {
    std::vector<Pauli> zz(static_cast<std::size_t>(n), Pauli::I);
    zz[static_cast<std::size_t>(i - 1)] = Pauli::Z;
    zz[static_cast<std::size_t>(i)] = Pauli::Z;
    terms.push_back({1.0, std::move(zz)});
  }
  for (int i = 1; i <= n; ++i) {
    std::vector<Pauli> z(static_cast<std::size_t>(n), Pauli::I);
    std::vector<Pauli> x(static_cast<std::size_t>(n), Pauli::I);
    z[static_cast<std::size_t>(i - 1)] = Pauli::Z;
    x[static_cast<std::size_t>(i - 1)] = Pauli::X;
    if (params.b_z != 0.0) terms.push_back({params.b_z, std::move(z)});
    if (params.b_x != 0.0) terms.push_back({params.b_x, std::move(x)});
  }
  return HermitianOperator::from_pauli_sum(n, terms);
}

HermitianOperator echo_perturbation(int n_qubits) {
  check_qubit_count(n_qubits);
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_qubits));
  Matrix v = Matrix::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) v(s, s) = -total_z(static_cast<std::size_t>(s), n_qubits);
  return HermitianOperator(n_qubits, std::move(v));
}

int phase_count(int n_qubits) { return parity_of(n_qubits) == Parity::Odd ? 4 : 5; }

PhaseLabel phase_label(int n_qubits, int index) {
  require_closed_form_size(n_qubits);
  const auto kets = phase_kets(n_qubits, index);
  PhaseLabel label{parity_of(n_qubits), index, {}};
  label.ket = kets.size() == 1 ? kets[0] : fmt::format("({}+{})/sqrt2", kets[0], kets[1]);
  return label;
}

PureState phase_state(int n_qubits, int index) {
  require_closed_form_size(n_qubits);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(hilbert_dimension(n_qubits)));
  for (const auto& bits : phase_kets(n_qubits, index)) v += basis_state(n_qubits, bits).amplitudes();
  return PureState::normalized(n_qubits, std::move(v));
}

std::vector<double> crossover_points(int n_qubits, Parity parity) {
  (void)n_qubits;
  if (parity == Parity::Odd) return {-2.0, 0.0, 2.0};
  return {-2.0, -1.0, 1.0, 2.0};
}

std::vector<double> crossover_points(int n_qubits) { return crossover_points(n_qubits, parity_of(n_qubits)); }

int phase_index(int n_qubits, double b_z) {
  require_closed_form_size(n_qubits);
  const auto points = crossover_points(n_qubits);
  int k = 1;
  for (double c : points) {
    if (b_z == c) return 0;
    if (b_z > c) ++k;
  }
  return k;
}

std::vector<PureState> closed_form_ground(const ChainParams& params) {
  params.validate();
  if (params.b_x != 0.0) throw InputError("closed_form_ground: requires b_x = 0");
  const int n = params.n_qubits;
  require_closed_form_size(n);

  std::vector<PureState> out;
  const int k = phase_index(n, params.b_z);
  if (k != 0) {
    out.push_back(phase_state(n, k));
    return out;
  }
  // On a crossover point: the two phases meeting there.
  const auto points = crossover_points(n);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] == params.b_z) {
      out.push_back(phase_state(n, static_cast<int>(i) + 1));
      out.push_back(phase_state(n, static_cast<int>(i) + 2));
    }
  }
  return out;
}

double closed_form_energy(const ChainParams& params) {
  params.validate();
  if (params.b_x != 0.0) throw InputError("closed_form_energy: requires b_x = 0");
  const int n = params.n_qubits;
  require_closed_form_size(n);
  const double nn = n;
  const double bz = params.b_z;

  if (bz <= -2.0) return nn * (bz + (nn - 1.0) / nn);
  if (bz >= 2.0) return nn * (-bz + (nn - 1.0) / nn);
  if (parity_of(n) == Parity::Odd) {
    if (bz <= 0.0) return nn * (bz / nn - (nn - 1.0) / nn);
    return nn * (-bz / nn - (nn - 1.0) / nn);
  }
  if (bz <= -1.0) return nn * (2.0 * bz / nn - (nn - 3.0) / nn);
  if (bz >= 1.0) return nn * (-2.0 * bz / nn - (nn - 3.0) / nn);
  return nn * (-1.0 + 1.0 / nn);
}

}  // namespace isingecho
