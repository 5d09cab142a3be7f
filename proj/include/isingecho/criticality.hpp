#pragma once

// Critical-point detection: approximate ground states built from two
// neighbouring B_x = 0 phases, interval splitting of the B_z axis, echo
// scans at fixed tau and localization of their minima.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "isingecho/dynamics.hpp"
#include "isingecho/hamiltonian.hpp"

namespace isingecho {

// |B_z| at which even chains switch from the B_c = +-1 to the B_c = +-2
// superposition.
inline constexpr double kEvenIntervalSplit = 1.44;
inline constexpr double kDefaultGridStep = 0.02;
// Minima shallower than this fraction of a scan's value range are ignored.
inline constexpr double kDefaultMinProminence = 0.01;
// Absolute prominence below which a scan minimum is treated as rounding noise.
inline constexpr double kScanNoiseFloor = 1e-12;

// psi = cos(phi)|psi_m> - sin(phi)|psi_n>
struct MixingAngle {
  double phi;
  int m;
  int n;
};

// Odd chains near B_c = -2 (m, n) = (1, 2) and B_c = +2 (m, n) = (4, 3):
//   tan phi = [(2 - |B_z|) + sqrt((2 - |B_z|)^2 + B_x^2)] / B_x
MixingAngle mixing_angle_odd(double b_z, double b_x);

enum class EvenBranch { NearTwo, NearOne };

// NearTwo: tan phi = [(2-|B_z|) + sqrt((2-|B_z|)^2 + 2 B_x^2)] / (sqrt2 B_x),
//          (m, n) = (1, 2) for B_z < 0, (5, 4) otherwise.
// NearOne: tan phi = [(1-|B_z|) + sqrt((1-|B_z|)^2 + B_x^2)] / B_x,
//          (m, n) = (2, 3) for B_z <= 0, (4, 3) otherwise.
MixingAngle mixing_angle_even(double b_z, double b_x, EvenBranch branch);
// Picks the branch by the interval split at |B_z| = 1.44.
MixingAngle mixing_angle_even(double b_z, double b_x);

PureState ground_state_approx_odd(int n_qubits, double b_z, double b_x);
PureState ground_state_approx_even(int n_qubits, double b_z, double b_x);
PureState ground_state_approx(int n_qubits, double b_z, double b_x);

// A piece of the B_z axis handled by one preparation circuit.
struct FieldInterval {
  double lo;
  double hi;
  bool lo_closed;
  bool hi_closed;

  bool contains(double b_z) const;
  // "[-3,-1.44]", "(-1.44,0]", ...
  std::string label() const;
};

// Odd: [-3,-1], (-1,1), [1,3]. Even: [-3,-1.44], (-1.44,0], (0,1.44), [1.44,3].
std::vector<FieldInterval> field_intervals(Parity parity);
// Index into field_intervals(parity). Values beyond +-3 map to the end pieces.
int interval_index(Parity parity, double b_z);
// Interior split points: odd {-1, 1}, even {-1.44, 0, 1.44}.
std::vector<double> interval_boundaries(Parity parity);

enum class ValueKind { ExactEcho, PerturbativeEcho, TwoLevelEcho, ReadoutAmplitude };
enum class InitialState { ExactGround, ApproxGround };

std::string_view value_kind_name(ValueKind kind);
ValueKind value_kind_from_name(std::string_view name);
std::string_view initial_state_name(InitialState source);
InitialState initial_state_from_name(std::string_view name);

struct ScanPoint {
  double b_z;
  double value;
};

struct Minimum {
  double b_z;           // parabolic estimate
  double value;         // sampled value at the grid minimum
  std::size_t index;    // grid index of the sampled minimum
};

struct MinimaOptions {
  // Minimum topographic prominence as a fraction of (max - min) of the grid.
  double min_relative_prominence = 0.0;
  double min_absolute_prominence = 0.0;
};

// Interior local minima, each refined by the vertex of the parabola through
// it and its two neighbours. A plateau bounded by larger values on both
// sides is reported once, at its leftmost point, without refinement.
// Endpoints are never minima. Throws InputError for fewer than 3 points or a
// grid that is not strictly increasing.
std::vector<Minimum> find_minima(std::span<const ScanPoint> grid, const MinimaOptions& options = {});

// min, min + step, ..., <= max (inclusive within 1e-9 step); points are
// rounded to 1e-12 so that values such as 0 and +-2 are hit exactly.
std::vector<double> make_grid(double min, double max, double step);

struct ScanRequest {
  int n_qubits = 3;
  double b_x = 0.1;
  double epsilon = 0.1;
  double tau = 3.141592653589793;
  std::vector<double> b_z;
  ValueKind kind = ValueKind::ExactEcho;
  InitialState source = InitialState::ExactGround;
  int readout_qubit = 2;
  double min_relative_prominence = kDefaultMinProminence;
  unsigned threads = 1;
};

struct EchoScan {
  int n_qubits;
  double b_x;
  double tau;
  double epsilon;
  ValueKind kind;
  InitialState source;
  std::vector<ScanPoint> grid;
  std::vector<Minimum> minima;
};

// Evaluates one grid point of a scan.
double scan_value(const ScanRequest& request, double b_z, SpectralCache* cache = nullptr);

EchoScan echo_scan(const ScanRequest& request);

}  // namespace isingecho
