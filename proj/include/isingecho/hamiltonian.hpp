#pragma once

// Antiferromagnetic Ising chain in a tilted field, open boundaries, J = 1:
//
//   H = sum_{i=1}^{N-1} sz_i sz_{i+1} + B_z sum_i sz_i + B_x sum_i sx_i
//
// plus the closed-form B_x = 0 ground states, energies and crossover points.

#include <string>
#include <vector>

#include "isingecho/spin_core.hpp"

namespace isingecho {

struct ChainParams {
  int n_qubits = 1;
  double b_z = 0.0;
  double b_x = 0.0;

  // Throws InputError / ResourceError.
  void validate() const;

  bool operator==(const ChainParams&) const = default;
};

enum class Parity { Odd, Even };

inline Parity parity_of(int n_qubits) { return (n_qubits % 2) ? Parity::Odd : Parity::Even; }

// One of the B_x = 0 phases: |psi_k^o>, k = 1..4, or |psi_k^e>, k = 1..5.
struct PhaseLabel {
  Parity parity;
  int index;
  std::string ket;  // "0101010" or "(010100+001010)/sqrt2"
};

HermitianOperator build_hamiltonian(const ChainParams& params);

// Echo perturbation V = -sum_i sz_i.
HermitianOperator echo_perturbation(int n_qubits);

// Number of B_x = 0 phases: 4 for odd N, 5 for even N.
int phase_count(int n_qubits);

// Closed forms are defined for odd N >= 3 and even N >= 4; anything else
// raises UnsupportedError.
PhaseLabel phase_label(int n_qubits, int index);
PureState phase_state(int n_qubits, int index);

// Phase whose open interval contains b_z, or 0 when b_z is a crossover point.
int phase_index(int n_qubits, double b_z);

// Ground state(s) for b_x = 0. Strictly inside an interval this is one state;
// at a crossover point it is the union of the adjacent phases' states.
std::vector<PureState> closed_form_ground(const ChainParams& params);

double closed_form_energy(const ChainParams& params);

// Odd: {-2, 0, 2}. Even: {-2, -1, 1, 2}.
std::vector<double> crossover_points(int n_qubits, Parity parity);
std::vector<double> crossover_points(int n_qubits);

}  // namespace isingecho
