#pragma once

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "isingecho/spin_core.hpp"

namespace testsupport {

using isingecho::Complex;
using isingecho::Matrix;
using isingecho::Vector;

inline std::mt19937_64 rng(std::uint64_t salt) { return std::mt19937_64(0x5eed0000ULL + salt); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline int uniform_int(std::mt19937_64& g, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

inline Vector random_vector(std::mt19937_64& g, Eigen::Index dim) {
  std::normal_distribution<double> n;
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(n(g), n(g));
  return v;
}

inline isingecho::PureState random_state(std::mt19937_64& g, int n_qubits) {
  return isingecho::PureState::normalized(
      n_qubits, random_vector(g, static_cast<Eigen::Index>(isingecho::hilbert_dimension(n_qubits))));
}

inline Matrix random_hermitian(std::mt19937_64& g, Eigen::Index dim) {
  std::normal_distribution<double> n;
  Matrix a(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) a(r, c) = Complex(n(g), n(g));
  return 0.5 * (a + a.adjoint());
}

// exp(-i H t) by scaling and squaring, independent of any eigensolver.
inline Matrix expm_evolution(const Matrix& h, double t) {
  const Matrix arg = Complex(0.0, -t) * h;
  return arg.exp();
}

// Dense Kronecker-product reference for a Pauli string, qubit 1 leftmost.
inline Matrix pauli_dense(const std::vector<isingecho::Pauli>& axes) {
  Matrix out = Matrix::Identity(1, 1);
  for (auto a : axes) {
    Matrix p(2, 2);
    switch (a) {
      case isingecho::Pauli::I: p << 1, 0, 0, 1; break;
      case isingecho::Pauli::X: p << 0, 1, 1, 0; break;
      case isingecho::Pauli::Y: p << 0, Complex(0, -1), Complex(0, 1), 0; break;
      case isingecho::Pauli::Z: p << 1, 0, 0, -1; break;
    }
    Matrix k(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c) k.block(2 * r, 2 * c, 2, 2) = out(r, c) * p;
    out = k;
  }
  return out;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testsupport
