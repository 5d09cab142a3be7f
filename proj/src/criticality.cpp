#include "isingecho/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "isingecho/network.hpp"
#include "isingecho/perturbation.hpp"

namespace isingecho {

namespace {

void require_positive_bx(double b_x, const char* who) {
  if (!(b_x > 0.0)) throw InputError(fmt::format("{}: b_x must be > 0, got {}", who, b_x));
}

PureState superpose(int n_qubits, const MixingAngle& angle) {
  const Vector v = std::cos(angle.phi) * phase_state(n_qubits, angle.m).amplitudes() -
                   std::sin(angle.phi) * phase_state(n_qubits, angle.n).amplitudes();
  return PureState::normalized(n_qubits, v);
}

std::string format_bound(double x) { return fmt::format("{:g}", x); }

}  // namespace

MixingAngle mixing_angle_odd(double b_z, double b_x) {
  require_positive_bx(b_x, "mixing_angle_odd");
  const double d = 2.0 - std::abs(b_z);
  const double phi = std::atan2(d + std::hypot(d, b_x), b_x);
  return b_z < 0.0 ? MixingAngle{phi, 1, 2} : MixingAngle{phi, 4, 3};
}

MixingAngle mixing_angle_even(double b_z, double b_x, EvenBranch branch) {
  require_positive_bx(b_x, "mixing_angle_even");
  if (branch == EvenBranch::NearTwo) {
    const double d = 2.0 - std::abs(b_z);
    const double phi = std::atan2(d + std::sqrt(d * d + 2.0 * b_x * b_x), std::numbers::sqrt2 * b_x);
    return b_z < 0.0 ? MixingAngle{phi, 1, 2} : MixingAngle{phi, 5, 4};
  }
  const double d = 1.0 - std::abs(b_z);
  const double phi = std::atan2(d + std::hypot(d, b_x), b_x);
  return b_z <= 0.0 ? MixingAngle{phi, 2, 3} : MixingAngle{phi, 4, 3};
}

MixingAngle mixing_angle_even(double b_z, double b_x) {
  const bool near_two = (b_z <= 0.0) ? b_z <= -kEvenIntervalSplit : b_z >= kEvenIntervalSplit;
  return mixing_angle_even(b_z, b_x, near_two ? EvenBranch::NearTwo : EvenBranch::NearOne);
}

PureState ground_state_approx_odd(int n_qubits, double b_z, double b_x) {
  if (parity_of(n_qubits) != Parity::Odd) throw InputError("ground_state_approx_odd: N must be odd");
  require_positive_bx(b_x, "ground_state_approx_odd");
  if (std::abs(b_z) >= 1.0) return superpose(n_qubits, mixing_angle_odd(b_z, b_x));
  if (b_z < 0.0) return phase_state(n_qubits, 2);
  if (b_z > 0.0) return phase_state(n_qubits, 3);
  return superpose(n_qubits, {std::numbers::pi / 4.0, 2, 3});
}

PureState ground_state_approx_even(int n_qubits, double b_z, double b_x) {
  if (parity_of(n_qubits) != Parity::Even || n_qubits < 4) {
    throw InputError("ground_state_approx_even: N must be even and >= 4");
  }
  require_positive_bx(b_x, "ground_state_approx_even");
  return superpose(n_qubits, mixing_angle_even(b_z, b_x));
}

PureState ground_state_approx(int n_qubits, double b_z, double b_x) {
  return parity_of(n_qubits) == Parity::Odd ? ground_state_approx_odd(n_qubits, b_z, b_x)
                                            : ground_state_approx_even(n_qubits, b_z, b_x);
}

bool FieldInterval::contains(double b_z) const {
  const bool above = lo_closed ? b_z >= lo : b_z > lo;
  const bool below = hi_closed ? b_z <= hi : b_z < hi;
  return above && below;
}

std::string FieldInterval::label() const {
  return fmt::format("{}{},{}{}", lo_closed ? '[' : '(', format_bound(lo), format_bound(hi), hi_closed ? ']' : ')');
}

std::vector<FieldInterval> field_intervals(Parity parity) {
  if (parity == Parity::Odd) {
    return {{-3.0, -1.0, true, true}, {-1.0, 1.0, false, false}, {1.0, 3.0, true, true}};
  }
  const double s = kEvenIntervalSplit;
  return {{-3.0, -s, true, true}, {-s, 0.0, false, true}, {0.0, s, false, false}, {s, 3.0, true, true}};
}

std::vector<double> interval_boundaries(Parity parity) {
  if (parity == Parity::Odd) return {-1.0, 1.0};
  return {-kEvenIntervalSplit, 0.0, kEvenIntervalSplit};
}

int interval_index(Parity parity, double b_z) {
  const auto intervals = field_intervals(parity);
  if (b_z < intervals.front().lo) return 0;
  if (b_z > intervals.back().hi) return static_cast<int>(intervals.size()) - 1;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].contains(b_z)) return static_cast<int>(i);
  }
  throw InputError(fmt::format("interval_index: b_z = {} is not a finite field value", b_z));
}

namespace {

constexpr std::pair<ValueKind, std::string_view> kValueKindNames[] = {
    {ValueKind::ExactEcho, "exact_echo"},
    {ValueKind::PerturbativeEcho, "perturbative_echo"},
    {ValueKind::TwoLevelEcho, "two_level_echo"},
    {ValueKind::ReadoutAmplitude, "readout_amplitude"},
};

constexpr std::pair<InitialState, std::string_view> kInitialStateNames[] = {
    {InitialState::ExactGround, "exact_ground"},
    {InitialState::ApproxGround, "approx_ground"},
};

}  // namespace

std::string_view value_kind_name(ValueKind kind) {
  for (const auto& [k, name] : kValueKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

ValueKind value_kind_from_name(std::string_view name) {
  for (const auto& [k, n] : kValueKindNames) {
    if (n == name) return k;
  }
  throw InputError(fmt::format("unknown value kind '{}'", name));
}

std::string_view initial_state_name(InitialState source) {
  for (const auto& [s, name] : kInitialStateNames) {
    if (s == source) return name;
  }
  return "?";
}

InitialState initial_state_from_name(std::string_view name) {
  for (const auto& [s, n] : kInitialStateNames) {
    if (n == name) return s;
  }
  throw InputError(fmt::format("unknown initial state source '{}'", name));
}

std::vector<Minimum> find_minima(std::span<const ScanPoint> grid, const MinimaOptions& options) {
  const std::size_t count = grid.size();
  if (count < 3) throw InputError(fmt::format("find_minima: need at least 3 grid points, got {}", count));
  for (std::size_t i = 1; i < count; ++i) {
    if (!(grid[i].b_z > grid[i - 1].b_z)) throw InputError("find_minima: grid must be strictly increasing");
  }

  double lowest = grid[0].value;
  double highest = grid[0].value;
  for (const auto& p : grid) {
    lowest = std::min(lowest, p.value);
    highest = std::max(highest, p.value);
  }
  const double prominence_floor =
      std::max(options.min_relative_prominence * (highest - lowest), options.min_absolute_prominence);

  // Height of the highest point crossed, walking from a minimum in one
  // direction until a strictly lower value (or the end) is reached.
  auto barrier = [&](std::size_t start, double level, int direction) {
    double top = level;
    for (auto j = static_cast<std::ptrdiff_t>(start) + direction;
         j >= 0 && j < static_cast<std::ptrdiff_t>(count); j += direction) {
      const double y = grid[static_cast<std::size_t>(j)].value;
      if (y < level) break;
      top = std::max(top, y);
    }
    return top;
  };

  std::vector<Minimum> out;
  std::size_t i = 1;
  while (i + 1 < count) {
    const double y = grid[i].value;
    if (!(grid[i - 1].value > y)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < count && grid[j + 1].value == y) ++j;
    if (j + 1 >= count || !(grid[j + 1].value > y)) {
      i = j + 1;
      continue;
    }
    const double prominence = std::min(barrier(i, y, -1), barrier(j, y, +1)) - y;
    if (prominence >= prominence_floor) {
      double estimate = grid[i].b_z;
      if (j == i) {
        const double x0 = grid[i - 1].b_z, x1 = grid[i].b_z, x2 = grid[i + 1].b_z;
        const double y0 = grid[i - 1].value, y2 = grid[i + 1].value;
        const double num = (x1 - x0) * (x1 - x0) * (y - y2) - (x1 - x2) * (x1 - x2) * (y - y0);
        const double den = (x1 - x0) * (y - y2) - (x1 - x2) * (y - y0);
        if (den != 0.0) estimate = x1 - 0.5 * num / den;
      }
      out.push_back({estimate, y, i});
    }
    i = j + 1;
  }
  return out;
}

std::vector<double> make_grid(double min, double max, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InputError(fmt::format("grid step must be > 0, got {}", step));
  if (!(min < max)) throw InputError(fmt::format("grid needs min < max, got [{}, {}]", min, max));
  const auto intervals = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9));
  std::vector<double> out;
  out.reserve(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double x = min + static_cast<double>(i) * step;
    out.push_back(std::round(x * 1e12) / 1e12);
  }
  return out;
}

double scan_value(const ScanRequest& request, double b_z, SpectralCache* cache) {
  const ChainParams params{request.n_qubits, b_z, request.b_x};
  const bool approx = request.source == InitialState::ApproxGround;

  switch (request.kind) {
    case ValueKind::ExactEcho: {
      if (!approx) return loschmidt_echo_exact_ground(params, request.epsilon, request.tau, cache);
      const PureState psi = ground_state_approx(request.n_qubits, b_z, request.b_x);
      SpectralCache local;
      SpectralCache& c = cache ? *cache : local;
      const auto h0 = c.get(params);
      const auto h1 = c.get(perturbed_params(params, request.epsilon));
      return std::clamp(std::norm(loschmidt_amplitude(*h0, *h1, psi, request.tau)), 0.0, 1.0);
    }
    case ValueKind::PerturbativeEcho:
    case ValueKind::TwoLevelEcho: {
      if (approx) throw InputError("perturbative and two-level echoes are defined for the exact ground state only");
      const auto spectrum = cache ? cache->get(params)
                                  : std::make_shared<const SpectralDecomposition>(
                                        diagonalize(build_hamiltonian(params)));
      const HermitianOperator v = echo_perturbation(request.n_qubits);
      return request.kind == ValueKind::PerturbativeEcho
                 ? echo_perturbative(*spectrum, v, request.epsilon, request.tau)
                 : echo_two_level(*spectrum, v, request.epsilon, request.tau);
    }
    case ValueKind::ReadoutAmplitude: {
      if (!approx) throw InputError("readout_amplitude needs approx_ground (the preparation network)");
      return protocol_readout(request.n_qubits, b_z, request.b_x, request.epsilon, request.tau,
                              request.readout_qubit)
          .amplitude;
    }
  }
  throw InputError("unknown value kind");
}

EchoScan echo_scan(const ScanRequest& request) {
  check_qubit_count(request.n_qubits);
  if (request.source == InitialState::ApproxGround) require_positive_bx(request.b_x, "echo_scan");
  for (std::size_t i = 1; i < request.b_z.size(); ++i) {
    if (!(request.b_z[i] > request.b_z[i - 1])) throw InputError("echo_scan: b_z grid must be strictly increasing");
  }

  EchoScan scan{request.n_qubits, request.b_x, request.tau, request.epsilon, request.kind, request.source, {}, {}};
  scan.grid.resize(request.b_z.size());

  // Each worker owns a contiguous slice; results land in grid order.
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) scan.grid[i] = {request.b_z[i], scan_value(request, request.b_z[i])};
  };
  const std::size_t count = request.b_z.size();
  const std::size_t workers = std::clamp<std::size_t>(request.threads, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    work(0, count);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }

  if (scan.grid.size() >= 3) {
    scan.minima = find_minima(scan.grid, {request.min_relative_prominence, kScanNoiseFloor});
  }
  return scan;
}

}  // namespace isingecho
