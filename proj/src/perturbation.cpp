#include "isingecho/perturbation.hpp"

#include <cmath>

#include <fmt/format.h>

namespace isingecho {

namespace {

// (1 - cos w t) / w^2, with its w -> 0 limit t^2/2.
double decay_kernel(double w, double t) {
  if (std::abs(w) <= kDegenerateGap) return 0.5 * t * t;
  return (1.0 - std::cos(w * t)) / (w * w);
}

// (1 - e^{-i w t} - i w t) / w^2, with its w -> 0 limit t^2/2.
Complex amplitude_kernel(double w, double t) {
  if (std::abs(w) <= kDegenerateGap) return {0.5 * t * t, 0.0};
  const Complex i(0.0, 1.0);
  return (1.0 - std::exp(-i * w * t) - i * w * t) / (w * w);
}

void require_match(const SpectralDecomposition& spectrum, const HermitianOperator& v) {
  if (spectrum.dimension() != v.dimension()) {
    throw InputError(fmt::format("perturbation: spectrum dimension {} vs operator dimension {}",
                                 spectrum.dimension(), v.dimension()));
  }
}

}  // namespace

Eigen::VectorXd ground_couplings(const SpectralDecomposition& spectrum, const HermitianOperator& v) {
  require_match(spectrum, v);
  const Vector v_ground = v.apply(spectrum.eigenvectors.col(0));
  return (spectrum.eigenvectors.adjoint() * v_ground).cwiseAbs2();
}

double echo_perturbative(const SpectralDecomposition& spectrum, const HermitianOperator& v, double epsilon,
                         double t) {
  const Eigen::VectorXd couplings = ground_couplings(spectrum, v);
  const double e0 = spectrum.ground_energy();
  double sum = 0.0;
  for (Eigen::Index a = 1; a < couplings.size(); ++a) {
    sum += couplings(a) * decay_kernel(spectrum.eigenvalues(a) - e0, t);
  }
  return 1.0 - 2.0 * epsilon * epsilon * sum;
}

Complex echo_amplitude_expansion(const SpectralDecomposition& spectrum, const HermitianOperator& v,
                                 double epsilon, double t) {
  require_match(spectrum, v);
  const Vector ground = spectrum.eigenvectors.col(0);
  const Vector v_ground = v.apply(ground);
  const Eigen::VectorXd couplings = (spectrum.eigenvectors.adjoint() * v_ground).cwiseAbs2();
  const double v00 = ground.dot(v_ground).real();
  const double e0 = spectrum.ground_energy();

  Complex second = v00 * v00 * t * t;
  for (Eigen::Index a = 1; a < couplings.size(); ++a) {
    second += 2.0 * couplings(a) * amplitude_kernel(spectrum.eigenvalues(a) - e0, t);
  }
  const Complex i(0.0, 1.0);
  return 1.0 - i * t * v00 * epsilon - 0.5 * epsilon * epsilon * second;
}

double echo_two_level(const SpectralDecomposition& spectrum, const HermitianOperator& v, double epsilon, double t) {
  const Eigen::VectorXd couplings = ground_couplings(spectrum, v);
  const double threshold = 1e-14 * std::max(1.0, v.matrix().cwiseAbs2().maxCoeff());
  const double e0 = spectrum.ground_energy();

  Eigen::Index first = -1;
  for (Eigen::Index a = 1; a < couplings.size(); ++a) {
    if (couplings(a) > threshold) {
      first = a;
      break;
    }
  }
  if (first < 0) return 1.0;

  const double delta = spectrum.eigenvalues(first) - e0;
  if (delta <= kDegenerateGap) {
    throw DegenerateGapError(fmt::format("echo_two_level: coupled level is degenerate with the ground state "
                                         "(gap {:.3g}); use echo_perturbative",
                                         delta));
  }
  double weight = 0.0;
  for (Eigen::Index a = 1; a < couplings.size(); ++a) {
    if (std::abs(spectrum.eigenvalues(a) - spectrum.eigenvalues(first)) <= 1e-8) weight += couplings(a);
  }
  return 1.0 - 2.0 * (weight / (delta * delta)) * epsilon * epsilon * (1.0 - std::cos(delta * t));
}

void LandauZenerParams::validate() const {
  if (!(delta_min > 0.0)) throw InputError(fmt::format("Landau-Zener: delta_min must be > 0, got {}", delta_min));
  if (!(z_nu > 0.0)) throw InputError(fmt::format("Landau-Zener: z_nu must be > 0, got {}", z_nu));
}

double lz_field(const LandauZenerParams& p) {
  const double magnitude = std::pow(std::abs(p.lambda), p.z_nu);
  return p.lambda < 0.0 ? -magnitude : magnitude;
}

HermitianOperator lz_hamiltonian(const LandauZenerParams& p) {
  p.validate();
  const std::vector<PauliTerm> terms{{p.delta_min, {Pauli::X}}, {lz_field(p), {Pauli::Z}}};
  return HermitianOperator::from_pauli_sum(1, terms);
}

HermitianOperator lz_perturbation() {
  const std::vector<PauliTerm> terms{{1.0, {Pauli::Z}}};
  return HermitianOperator::from_pauli_sum(1, terms);
}

namespace {

// |lambda|^{2 z nu}
double field_sq(const LandauZenerParams& p) { return std::pow(std::abs(p.lambda), 2.0 * p.z_nu); }

}  // namespace

double lz_gap(const LandauZenerParams& p) {
  p.validate();
  return 2.0 * std::sqrt(field_sq(p) + p.delta_min * p.delta_min);
}

double lz_matrix_element_sq(const LandauZenerParams& p) {
  p.validate();
  const double d2 = p.delta_min * p.delta_min;
  return d2 / (d2 + field_sq(p));
}

double lz_echo_gaussian(const LandauZenerParams& p) {
  p.validate();
  return std::exp(-p.epsilon * p.epsilon * p.t * p.t * lz_matrix_element_sq(p));
}

}  // namespace isingecho
