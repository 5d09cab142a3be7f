#include "isingecho/spin_core.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

namespace isingecho {

namespace {

std::atomic<int> g_qubit_cap{kDefaultQubitCap};

constexpr double kHermitianTol = 1e-12;
constexpr double kNormInputTol = 1e-9;

void require_dimension(int n_qubits, Eigen::Index size, const char* what) {
  if (static_cast<std::size_t>(size) != hilbert_dimension(n_qubits)) {
    throw InputError(fmt::format("{}: expected dimension {} for {} qubits, got {}", what,
                                 hilbert_dimension(n_qubits), n_qubits, size));
  }
}

double max_hermitian_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

int qubit_cap() { return g_qubit_cap.load(); }

void set_qubit_cap(int cap) {
  if (cap < 1 || cap > 30) throw InputError(fmt::format("qubit cap {} out of range [1, 30]", cap));
  g_qubit_cap.store(cap);
}

void check_qubit_count(int n_qubits) {
  if (n_qubits < 1) throw InputError(fmt::format("number of qubits must be >= 1, got {}", n_qubits));
  if (n_qubits > qubit_cap()) {
    throw ResourceError(fmt::format("{} qubits exceeds the configured cap of {}", n_qubits, qubit_cap()));
  }
}

int total_z(std::size_t index, int n_qubits) {
  const int ones = std::popcount(index & (hilbert_dimension(n_qubits) - 1));
  return n_qubits - 2 * ones;
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(int n_qubits, Vector amplitudes) : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  check_qubit_count(n_qubits);
  require_dimension(n_qubits, amplitudes_.size(), "PureState");
  const double norm = amplitudes_.norm();
  if (!(std::abs(norm - 1.0) <= kNormInputTol)) {
    throw InputError(fmt::format("PureState: amplitudes have norm {:.15g}, expected 1", norm));
  }
  amplitudes_ /= norm;
}

PureState PureState::normalized(int n_qubits, Vector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InputError("PureState: cannot normalize a zero vector");
  amplitudes /= norm;
  return PureState(n_qubits, std::move(amplitudes));
}

PureState PureState::basis(int n_qubits, std::size_t index) {
  check_qubit_count(n_qubits);
  const std::size_t dim = hilbert_dimension(n_qubits);
  if (index >= dim) throw InputError(fmt::format("basis index {} out of range for {} qubits", index, n_qubits));
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(n_qubits, std::move(v));
}

std::size_t PureState::dominant_index() const {
  Eigen::Index best = 0;
  amplitudes_.cwiseAbs().maxCoeff(&best);
  return static_cast<std::size_t>(best);
}

PureState basis_state(int n_qubits, std::string_view bits) {
  if (static_cast<int>(bits.size()) != n_qubits) {
    throw InputError(fmt::format("basis_state: bit string '{}' has length {}, expected {}", bits, bits.size(),
                                 n_qubits));
  }
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw InputError(fmt::format("basis_state: invalid bit '{}'", c));
    index = (index << 1) | static_cast<std::size_t>(c == '1');
  }
  return PureState::basis(n_qubits, index);
}

// ---------------------------------------------------------------------------
// Pauli strings

std::vector<Pauli> parse_pauli_string(std::string_view text) {
  std::vector<Pauli> out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case 'I': out.push_back(Pauli::I); break;
      case 'X': out.push_back(Pauli::X); break;
      case 'Y': out.push_back(Pauli::Y); break;
      case 'Z': out.push_back(Pauli::Z); break;
      default: throw InputError(fmt::format("invalid Pauli axis '{}'", c));
    }
  }
  return out;
}

namespace {

// P|s> = phase(s) |s ^ flip>.
struct PauliAction {
  std::size_t flip = 0;
  std::size_t z_mask = 0;  // qubits contributing (-1)^bit
  int y_count = 0;         // each Y contributes i * (-1)^bit

  Complex phase(std::size_t s) const {
    const int sign = (std::popcount(s & z_mask) & 1) ? -1 : 1;
    // i^y_count
    static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return static_cast<double>(sign) * kIPow[y_count & 3];
  }
};

PauliAction pauli_action(int n_qubits, std::span<const Pauli> axes) {
  if (static_cast<int>(axes.size()) != n_qubits) {
    throw InputError(fmt::format("Pauli string has length {}, expected {}", axes.size(), n_qubits));
  }
  PauliAction a;
  for (int q = 1; q <= n_qubits; ++q) {
    const std::size_t m = qubit_mask(n_qubits, q);
    switch (axes[static_cast<std::size_t>(q - 1)]) {
      case Pauli::I: break;
      case Pauli::X: a.flip |= m; break;
      case Pauli::Y:
        // Y|0> = i|1>, Y|1> = -i|0>
        a.flip |= m;
        a.z_mask |= m;
        ++a.y_count;
        break;
      case Pauli::Z: a.z_mask |= m; break;
    }
  }
  return a;
}

}  // namespace

Vector pauli_string_apply(const Vector& amplitudes, int n_qubits, std::span<const Pauli> axes) {
  require_dimension(n_qubits, amplitudes.size(), "pauli_string_apply");
  const PauliAction a = pauli_action(n_qubits, axes);
  Vector out(amplitudes.size());
  for (Eigen::Index s = 0; s < amplitudes.size(); ++s) {
    const auto us = static_cast<std::size_t>(s);
    out(static_cast<Eigen::Index>(us ^ a.flip)) = a.phase(us) * amplitudes(s);
  }
  return out;
}

PureState pauli_string_apply(const PureState& state, std::span<const Pauli> axes) {
  return PureState(state.n_qubits(), pauli_string_apply(state.amplitudes(), state.n_qubits(), axes));
}

Complex overlap(const PureState& a, const PureState& b) {
  if (a.dimension() != b.dimension()) {
    throw InputError(fmt::format("overlap: dimension mismatch {} vs {}", a.dimension(), b.dimension()));
  }
  return a.amplitudes().dot(b.amplitudes());
}

double fidelity(const PureState& a, const PureState& b) {
  return std::clamp(std::norm(overlap(a, b)), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(int n_qubits, Matrix matrix) : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
  check_qubit_count(n_qubits);
  if (matrix_.rows() != matrix_.cols()) throw InputError("HermitianOperator: matrix is not square");
  require_dimension(n_qubits, matrix_.rows(), "HermitianOperator");
  const double defect = max_hermitian_defect(matrix_);
  if (!(defect <= kHermitianTol)) {
    throw InputError(fmt::format("HermitianOperator: matrix deviates from Hermitian by {:.3g}", defect));
  }
  // Symmetrize so downstream solvers see an exactly Hermitian matrix.
  matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
}

HermitianOperator HermitianOperator::from_pauli_sum(int n_qubits, std::span<const PauliTerm> terms) {
  check_qubit_count(n_qubits);
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_qubits));
  Matrix m = Matrix::Zero(dim, dim);
  for (const PauliTerm& term : terms) {
    const PauliAction a = pauli_action(n_qubits, term.axes);
    for (Eigen::Index s = 0; s < dim; ++s) {
      const auto us = static_cast<std::size_t>(s);
      m(static_cast<Eigen::Index>(us ^ a.flip), s) += term.coefficient * a.phase(us);
    }
  }
  return HermitianOperator(n_qubits, std::move(m));
}

bool HermitianOperator::is_real() const { return matrix_.imag().cwiseAbs().maxCoeff() == 0.0; }

Complex HermitianOperator::element(const Vector& a, const Vector& b) const { return a.dot(matrix_ * b); }

HermitianOperator HermitianOperator::plus_scaled(double scale, const HermitianOperator& other) const {
  if (other.n_qubits_ != n_qubits_) throw InputError("HermitianOperator: qubit count mismatch");
  return HermitianOperator(n_qubits_, matrix_ + scale * other.matrix_);
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(int n_qubits, Matrix matrix, Trusted) : n_qubits_(n_qubits), matrix_(std::move(matrix)) {}

DensityMatrix::DensityMatrix(int n_qubits, Matrix matrix) : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
  check_qubit_count(n_qubits);
  if (matrix_.rows() != matrix_.cols()) throw InputError("DensityMatrix: matrix is not square");
  require_dimension(n_qubits, matrix_.rows(), "DensityMatrix");
  const double defect = max_hermitian_defect(matrix_);
  if (!(defect <= kHermitianTol)) {
    throw InputError(fmt::format("DensityMatrix: not Hermitian (defect {:.3g})", defect));
  }
  const Complex tr = matrix_.trace();
  if (!(std::abs(tr - Complex(1.0, 0.0)) <= 1e-12)) {
    throw InputError(fmt::format("DensityMatrix: trace {:.15g} != 1", tr.real()));
  }
  const Matrix sym = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw InputError(fmt::format("DensityMatrix: negative eigenvalue {:.3g}", es.eigenvalues().minCoeff()));
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& state) {
  const Vector& v = state.amplitudes();
  return DensityMatrix(state.n_qubits(), v * v.adjoint(), Trusted{});
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  check_qubit_count(n_qubits);
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_qubits));
  return DensityMatrix(n_qubits, Matrix::Identity(dim, dim) / static_cast<double>(dim), Trusted{});
}

double DensityMatrix::population(std::size_t index) const {
  if (index >= static_cast<std::size_t>(matrix_.rows())) throw InputError("DensityMatrix: index out of range");
  const auto i = static_cast<Eigen::Index>(index);
  return matrix_(i, i).real();
}

double DensityMatrix::trace() const { return matrix_.trace().real(); }

DensityMatrix dephase(const DensityMatrix& rho) {
  Matrix d = Matrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  d.diagonal() = rho.matrix().diagonal();
  return DensityMatrix(rho.n_qubits(), std::move(d), DensityMatrix::Trusted{});
}

// ---------------------------------------------------------------------------
// Gates

namespace {

struct KindName {
  GateKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {GateKind::RotY, "ROTY"},
    {GateKind::Not, "NOT"},
    {GateKind::Hadamard, "H"},
    {GateKind::Cnot, "CNOT"},
    {GateKind::ControlledRotY, "CROTY"},
    {GateKind::Swap, "SWAP"},
    {GateKind::ZZEvolution, "ZZ"},
    {GateKind::ZEvolution, "Z"},
    {GateKind::GlobalZEvolution, "GLOBALZ"},
};

Matrix rot_y_matrix(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Matrix r(2, 2);
  r << c, s, -s, c;
  return r;
}

// Diagonal phase of a diagonal gate at basis state `index` of an
// n-qubit register.
Complex diagonal_phase(const Gate& g, std::size_t index, int n_qubits) {
  double generator = 0.0;
  switch (g.kind) {
    case GateKind::ZEvolution: generator = z_eigenvalue(index, n_qubits, g.targets[0]); break;
    case GateKind::ZZEvolution:
      generator = z_eigenvalue(index, n_qubits, g.targets[0]) * z_eigenvalue(index, n_qubits, g.targets[1]);
      break;
    case GateKind::GlobalZEvolution:
      for (int q : g.targets) generator += z_eigenvalue(index, n_qubits, q);
      break;
    default: break;
  }
  return std::polar(1.0, -g.angle * generator);
}

}  // namespace

std::string_view gate_kind_name(GateKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "?";
}

GateKind gate_kind_from_name(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) return kn.kind;
  }
  throw InputError(fmt::format("unknown gate kind '{}'", name));
}

Gate Gate::rot_y(int target, double phi) { return {GateKind::RotY, {target}, {}, phi}; }
Gate Gate::not_gate(int target) { return {GateKind::Not, {target}, {}, 0.0}; }
Gate Gate::hadamard(int target) { return {GateKind::Hadamard, {target}, {}, 0.0}; }
Gate Gate::cnot(int control, int target) { return {GateKind::Cnot, {target}, {control}, 0.0}; }
Gate Gate::controlled_rot_y(int control, int target, double phi) {
  return {GateKind::ControlledRotY, {target}, {control}, phi};
}
Gate Gate::swap(int a, int b) { return {GateKind::Swap, {a, b}, {}, 0.0}; }
Gate Gate::zz_evolution(int a, int b, double angle) { return {GateKind::ZZEvolution, {a, b}, {}, angle}; }
Gate Gate::z_evolution(int target, double angle) { return {GateKind::ZEvolution, {target}, {}, angle}; }
Gate Gate::global_z_evolution(int n_qubits, double angle) {
  Gate g{GateKind::GlobalZEvolution, {}, {}, angle};
  for (int q = 1; q <= n_qubits; ++q) g.targets.push_back(q);
  return g;
}

bool Gate::has_angle() const {
  switch (kind) {
    case GateKind::RotY:
    case GateKind::ControlledRotY:
    case GateKind::ZZEvolution:
    case GateKind::ZEvolution:
    case GateKind::GlobalZEvolution: return true;
    default: return false;
  }
}

bool Gate::is_diagonal() const {
  return kind == GateKind::ZEvolution || kind == GateKind::ZZEvolution || kind == GateKind::GlobalZEvolution;
}

Gate Gate::inverse() const {
  Gate g = *this;
  if (has_angle()) g.angle = -angle;
  return g;
}

Matrix Gate::local_matrix() const {
  const Complex one(1.0, 0.0);
  switch (kind) {
    case GateKind::RotY: return rot_y_matrix(angle);
    case GateKind::Not: {
      Matrix m(2, 2);
      m << 0, 1, 1, 0;
      return m;
    }
    case GateKind::Hadamard: {
      Matrix m(2, 2);
      m << 1, 1, 1, -1;
      return m / std::numbers::sqrt2;
    }
    case GateKind::Cnot: {
      Matrix m = Matrix::Identity(4, 4);
      m.bottomRightCorner(2, 2) << 0, 1, 1, 0;
      return m;
    }
    case GateKind::ControlledRotY: {
      Matrix m = Matrix::Identity(4, 4);
      m.bottomRightCorner(2, 2) = rot_y_matrix(angle);
      return m;
    }
    case GateKind::Swap: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = one;
      return m;
    }
    case GateKind::ZEvolution:
    case GateKind::ZZEvolution:
    case GateKind::GlobalZEvolution: {
      // Local register: the gate's targets in listed order.
      const int k = static_cast<int>(targets.size());
      Gate local = *this;
      for (int i = 0; i < k; ++i) local.targets[static_cast<std::size_t>(i)] = i + 1;
      const auto dim = static_cast<Eigen::Index>(hilbert_dimension(k));
      Matrix m = Matrix::Zero(dim, dim);
      for (Eigen::Index s = 0; s < dim; ++s) m(s, s) = diagonal_phase(local, static_cast<std::size_t>(s), k);
      return m;
    }
  }
  throw InputError("unknown gate kind");
}

void Gate::validate(int n_qubits) const {
  std::size_t want_targets = 1;
  std::size_t want_controls = 0;
  switch (kind) {
    case GateKind::Cnot:
    case GateKind::ControlledRotY: want_controls = 1; break;
    case GateKind::Swap:
    case GateKind::ZZEvolution: want_targets = 2; break;
    case GateKind::GlobalZEvolution: want_targets = targets.size(); break;
    default: break;
  }
  if (targets.size() != want_targets || controls.size() != want_controls || targets.empty()) {
    throw InputError(fmt::format("gate {}: wrong number of qubit indices", gate_kind_name(kind)));
  }
  std::vector<int> all = controls;
  all.insert(all.end(), targets.begin(), targets.end());
  for (int q : all) {
    if (q < 1 || q > n_qubits) {
      throw InputError(fmt::format("gate {}: qubit index {} outside [1, {}]", gate_kind_name(kind), q, n_qubits));
    }
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw InputError(fmt::format("gate {}: repeated qubit index", gate_kind_name(kind)));
  }
}

Vector apply_gate(const Vector& amplitudes, int n_qubits, const Gate& gate) {
  require_dimension(n_qubits, amplitudes.size(), "apply_gate");
  gate.validate(n_qubits);
  const auto dim = static_cast<std::size_t>(amplitudes.size());

  if (gate.is_diagonal()) {
    Vector out(amplitudes.size());
    for (std::size_t s = 0; s < dim; ++s) {
      const auto i = static_cast<Eigen::Index>(s);
      out(i) = diagonal_phase(gate, s, n_qubits) * amplitudes(i);
    }
    return out;
  }

  // Gather-multiply-scatter over the gate's qubits (controls then targets).
  std::vector<std::size_t> masks;
  for (int q : gate.controls) masks.push_back(qubit_mask(n_qubits, q));
  for (int q : gate.targets) masks.push_back(qubit_mask(n_qubits, q));
  std::size_t gate_bits = 0;
  for (std::size_t m : masks) gate_bits |= m;

  const Matrix local = gate.local_matrix();
  const std::size_t k = masks.size();
  const std::size_t local_dim = std::size_t{1} << k;
  std::vector<std::size_t> offsets(local_dim, 0);
  for (std::size_t j = 0; j < local_dim; ++j) {
    for (std::size_t b = 0; b < k; ++b) {
      if (j & (std::size_t{1} << (k - 1 - b))) offsets[j] |= masks[b];
    }
  }

  Vector out = amplitudes;
  Vector in_local(static_cast<Eigen::Index>(local_dim));
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & gate_bits) continue;
    for (std::size_t j = 0; j < local_dim; ++j) {
      in_local(static_cast<Eigen::Index>(j)) = amplitudes(static_cast<Eigen::Index>(base | offsets[j]));
    }
    const Vector out_local = local * in_local;
    for (std::size_t j = 0; j < local_dim; ++j) {
      out(static_cast<Eigen::Index>(base | offsets[j])) = out_local(static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

PureState apply_gate(const PureState& state, const Gate& gate) {
  return PureState(state.n_qubits(), apply_gate(state.amplitudes(), state.n_qubits(), gate));
}

Matrix gate_matrix(const Gate& gate, int n_qubits) {
  check_qubit_count(n_qubits);
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_qubits));
  Matrix m(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    Vector e = Vector::Zero(dim);
    e(s) = 1.0;
    m.col(s) = apply_gate(e, n_qubits, gate);
  }
  return m;
}

}  // namespace isingecho
