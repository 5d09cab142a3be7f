#pragma once

// Gate-network form of the echo measurement:
//
//   |Psi> = U0^dagger  exp(-i tau eps sum sz)  U0 |0...0>,
//   rho = D(|Psi><Psi|),   A = rho_ss - rho_nn,
//
// where U0 prepares the approximate ground state, D removes off-diagonal
// elements, s = |0...0> and n is the basis state with only the readout
// qubit set.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "isingecho/criticality.hpp"
#include "isingecho/hamiltonian.hpp"
#include "isingecho/spin_core.hpp"

namespace isingecho {

struct GateNetwork {
  int n_qubits = 0;
  std::vector<Gate> gates;
  std::string label;

  void validate() const;
  Vector apply(const Vector& amplitudes) const;
  PureState apply(const PureState& state) const;
  GateNetwork inverse() const;
  Matrix unitary() const;
};

// U0 for chains of 3 (odd) or 4 (even) qubits on interval `interval` of
// field_intervals(parity). b_z must lie in that interval and b_x > 0.
//   odd  [-3,-1]    RotY(phi) on qubit 2
//   odd  (-1,1)     RotY(theta) on 1, CNOT 1->2, CNOT 1->3, NOT 2 with
//                   theta = 0, pi/4, pi/2 for b_z <, =, > 0
//   odd  [1,3]      first network followed by NOT on every qubit
//   even [-3,-1.44] RotY(phi) on 2, CRotY(-pi/4) 2->3, CNOT 3->2
//   even (-1.44,0]  H on 2, NOT 3, CNOT 2->3, CRotY(phi) 2->4,
//                   SWAP 2,3, CRotY(phi) 2->1, SWAP 2,3
//   even (0,1.44), [1.44,3]: mirrored networks followed by NOT on every qubit
GateNetwork build_preparation_network(Parity parity, int interval, double b_z, double b_x);
// Chooses N from the parity and the interval from b_z.
GateNetwork build_preparation_network(int n_qubits, double b_z, double b_x);

// U0, then the single-step echo exp(-i tau eps sum sz), then U0^dagger.
GateNetwork build_protocol_network(const GateNetwork& preparation, double epsilon, double tau);

// Removes pairs of identical SWAP gates whose enclosed gates commute with
// that SWAP (checked on the enclosed unitary to 1e-12). Applied to a protocol
// network this drops the SWAPs around the echo step.
GateNetwork cancel_commuting_swaps(const GateNetwork& network);

struct ReadoutResult {
  int qubit;
  double amplitude;  // rho_ss - rho_nn
  double l_value;    // rho_ss
};

// Dephases `rho` and reads the population difference on `qubit`.
ReadoutResult readout(const DensityMatrix& rho, int qubit);

ReadoutResult run_protocol(const GateNetwork& preparation, double epsilon, double tau, int readout_qubit);

// Protocol readout at one field value with the interval-appropriate network.
ReadoutResult protocol_readout(int n_qubits, double b_z, double b_x, double epsilon, double tau,
                               int readout_qubit);

// max over the grid points of interval `interval` of |l_value - L_exact|,
// L_exact from the exact ground state and exact U_p^dagger U.
double protocol_vs_exact(int n_qubits, double b_x, double epsilon, double tau, int interval,
                         double step = kDefaultGridStep);

// Line-oriented text form:
//   NETWORK <n_qubits> [label]
//   GATE <KIND> <targets> [<controls>] [<angle>]
// with comma-separated qubit lists; '#' starts a comment line.
std::string serialize_network(const GateNetwork& network);
GateNetwork parse_network(std::string_view text);

}  // namespace isingecho
