#pragma once

// Second-order expansion of the Loschmidt echo around epsilon = 0 and the
// (generalized) Landau-Zener two-level model of a gap minimum.

#include <Eigen/Dense>

#include "isingecho/dynamics.hpp"
#include "isingecho/spin_core.hpp"

namespace isingecho {

// Levels closer than this to E_0 use the analytic zero-gap limit.
inline constexpr double kDegenerateGap = 1e-10;

// |V_{0a}|^2 = |<a|V|0>|^2 for every eigenstate a of the unperturbed spectrum.
Eigen::VectorXd ground_couplings(const SpectralDecomposition& spectrum, const HermitianOperator& v);

// L ~ 1 - 2 eps^2 sum_{a>=1} |V_0a|^2 (1 - cos w_a t) / w_a^2, w_a = E_a - E_0.
// Terms with |w_a| <= kDegenerateGap contribute t^2/2 in place of the ratio.
double echo_perturbative(const SpectralDecomposition& spectrum, const HermitianOperator& v, double epsilon,
                         double t);

// Echo amplitude to second order:
//   l ~ 1 - i t V_00 eps
//       - eps^2/2 [ V_00^2 t^2 + 2 sum_{a>=1} |V_0a|^2 (1 - e^{-i w_a t} - i w_a t) / w_a^2 ]
Complex echo_amplitude_expansion(const SpectralDecomposition& spectrum, const HermitianOperator& v,
                                 double epsilon, double t);

// Truncation to the lowest excited level that couples to the ground state
// through V:  L ~ 1 - 2 (|V_01|^2 / D^2) eps^2 (1 - cos D t).
// Levels degenerate with that one (within 1e-8) have their |V_0a|^2 summed.
// Levels with vanishing coupling (e.g. forbidden by a symmetry of V) are
// skipped; if none couples the echo is 1. Throws DegenerateGapError when the
// selected level is within kDegenerateGap of E_0.
double echo_two_level(const SpectralDecomposition& spectrum, const HermitianOperator& v, double epsilon, double t);

struct LandauZenerParams {
  double delta_min = 1.0;
  double lambda = 0.0;
  double z_nu = 1.0;
  double epsilon = 0.0;
  double t = 0.0;

  // Throws InputError unless delta_min > 0 and z_nu > 0.
  void validate() const;
};

// s(lambda) |lambda|^{z nu}
double lz_field(const LandauZenerParams& p);

// H_LZ = delta_min sx + s(lambda)|lambda|^{z nu} sz on one qubit.
HermitianOperator lz_hamiltonian(const LandauZenerParams& p);
// V = sz
HermitianOperator lz_perturbation();

// 2 sqrt(|lambda|^{2 z nu} + delta_min^2)
double lz_gap(const LandauZenerParams& p);
// delta_min^2 / (delta_min^2 + |lambda|^{2 z nu})
double lz_matrix_element_sq(const LandauZenerParams& p);
// exp(-eps^2 delta_min^2 t^2 / (delta_min^2 + |lambda|^{2 z nu}))
double lz_echo_gaussian(const LandauZenerParams& p);

}  // namespace isingecho
