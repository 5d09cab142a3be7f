#pragma once

// Hilbert-space foundation shared by every other module: pure states,
// density matrices, Hermitian operators, Pauli strings and gates.
//
// Conventions
//   * Qubits are numbered 1..N; qubit 1 is the most-significant bit of the
//     computational-basis index, so |0101> is index 5.
//   * sigma_z|0> = +|0>, sigma_z|1> = -|1>.
//   * RotY(phi) = exp(i phi sigma_y): |0> -> cos(phi)|0> - sin(phi)|1>.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "isingecho/error.hpp"

namespace isingecho {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr int kDefaultQubitCap = 14;

// Process-wide limit on N for dense 2^N representations.
int qubit_cap();
void set_qubit_cap(int cap);
// Throws InputError for n < 1 and ResourceError for n above the cap.
void check_qubit_count(int n_qubits);

inline std::size_t hilbert_dimension(int n_qubits) {
  return std::size_t{1} << n_qubits;
}

// Bit of the basis index that belongs to qubit q (1-based).
inline std::size_t qubit_mask(int n_qubits, int qubit) {
  return std::size_t{1} << (n_qubits - qubit);
}

// sigma_z eigenvalue (+1 / -1) of qubit q in basis state `index`.
inline int z_eigenvalue(std::size_t index, int n_qubits, int qubit) {
  return (index & qubit_mask(n_qubits, qubit)) ? -1 : 1;
}

// Sum over all qubits of the sigma_z eigenvalues of basis state `index`.
int total_z(std::size_t index, int n_qubits);

class PureState {
 public:
  // The norm must be 1 to within 1e-9; the stored vector is renormalized
  // so that it holds to machine precision.
  PureState(int n_qubits, Vector amplitudes);

  // Normalizes an arbitrary non-zero vector.
  static PureState normalized(int n_qubits, Vector amplitudes);
  static PureState basis(int n_qubits, std::size_t index);

  int n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }

  // Index of the largest-magnitude amplitude (first one on ties).
  std::size_t dominant_index() const;

 private:
  int n_qubits_;
  Vector amplitudes_;
};

// |bits>, with bits[0] the value of qubit 1.
PureState basis_state(int n_qubits, std::string_view bits);

enum class Pauli : char { I = 'I', X = 'X', Y = 'Y', Z = 'Z' };

// "IXZ" -> {I, X, Z}. Throws InputError on any other character.
std::vector<Pauli> parse_pauli_string(std::string_view text);

// Applies the product of single-qubit Paulis by bit manipulation.
PureState pauli_string_apply(const PureState& state, std::span<const Pauli> axes);
Vector pauli_string_apply(const Vector& amplitudes, int n_qubits, std::span<const Pauli> axes);

// <a|b>
Complex overlap(const PureState& a, const PureState& b);
// |<a|b>|^2
double fidelity(const PureState& a, const PureState& b);

struct PauliTerm {
  double coefficient;
  std::vector<Pauli> axes;
};

class HermitianOperator {
 public:
  // Throws InputError if `matrix` is not square 2^N or not Hermitian within
  // 1e-12 elementwise.
  HermitianOperator(int n_qubits, Matrix matrix);

  // Dense matrix of sum_k c_k P_k, assembled column by column through
  // bit manipulation rather than Kronecker products.
  static HermitianOperator from_pauli_sum(int n_qubits, std::span<const PauliTerm> terms);

  int n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  bool is_real() const;

  Vector apply(const Vector& v) const { return matrix_ * v; }
  // <a|O|b>
  Complex element(const Vector& a, const Vector& b) const;

  HermitianOperator plus_scaled(double scale, const HermitianOperator& other) const;

 private:
  int n_qubits_;
  Matrix matrix_;
};

class DensityMatrix {
 public:
  // Validates Hermiticity (1e-12), unit trace (1e-12) and eigenvalues >= -1e-10.
  DensityMatrix(int n_qubits, Matrix matrix);

  static DensityMatrix from_pure(const PureState& state);
  static DensityMatrix maximally_mixed(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const Matrix& matrix() const { return matrix_; }
  double population(std::size_t index) const;
  double trace() const;

 private:
  struct Trusted {};
  DensityMatrix(int n_qubits, Matrix matrix, Trusted);

  int n_qubits_;
  Matrix matrix_;

  friend DensityMatrix dephase(const DensityMatrix& rho);
};

// Zeroes every off-diagonal entry in the computational basis.
DensityMatrix dephase(const DensityMatrix& rho);

enum class GateKind {
  RotY,
  Not,
  Hadamard,
  Cnot,
  ControlledRotY,
  Swap,
  ZZEvolution,       // exp(-i angle sz^a sz^b)
  ZEvolution,        // exp(-i angle sz^q)
  GlobalZEvolution,  // exp(-i angle sum_q sz^q)
};

std::string_view gate_kind_name(GateKind kind);
GateKind gate_kind_from_name(std::string_view name);

struct Gate {
  GateKind kind;
  std::vector<int> targets;
  std::vector<int> controls;
  double angle = 0.0;

  static Gate rot_y(int target, double phi);
  static Gate not_gate(int target);
  static Gate hadamard(int target);
  static Gate cnot(int control, int target);
  static Gate controlled_rot_y(int control, int target, double phi);
  static Gate swap(int a, int b);
  static Gate zz_evolution(int a, int b, double angle);
  static Gate z_evolution(int target, double angle);
  static Gate global_z_evolution(int n_qubits, double angle);

  bool has_angle() const;
  bool is_diagonal() const;
  Gate inverse() const;

  // Matrix on the gate's own qubits, ordered controls then targets with the
  // first listed qubit as the most-significant bit.
  Matrix local_matrix() const;

  // Throws InputError unless all indices are distinct and in [1, n_qubits].
  void validate(int n_qubits) const;

  bool operator==(const Gate&) const = default;
};

PureState apply_gate(const PureState& state, const Gate& gate);
Vector apply_gate(const Vector& amplitudes, int n_qubits, const Gate& gate);

// Full 2^N matrix of `gate` embedded in an N-qubit register.
Matrix gate_matrix(const Gate& gate, int n_qubits);

}  // namespace isingecho
