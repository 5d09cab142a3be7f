#include "isingecho/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "isingecho/dynamics.hpp"

namespace isingecho {

void GateNetwork::validate() const {
  check_qubit_count(n_qubits);
  for (const auto& g : gates) g.validate(n_qubits);
}

Vector GateNetwork::apply(const Vector& amplitudes) const {
  Vector v = amplitudes;
  for (const auto& g : gates) v = apply_gate(v, n_qubits, g);
  return v;
}

PureState GateNetwork::apply(const PureState& state) const {
  if (state.n_qubits() != n_qubits) {
    throw InputError(fmt::format("network on {} qubits applied to a {}-qubit state", n_qubits, state.n_qubits()));
  }
  return PureState::normalized(n_qubits, apply(state.amplitudes()));
}

GateNetwork GateNetwork::inverse() const {
  GateNetwork out{n_qubits, {}, label.empty() ? label : label + " inverse"};
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) out.gates.push_back(it->inverse());
  return out;
}

Matrix GateNetwork::unitary() const {
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_qubits));
  Matrix u(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    Vector e = Vector::Zero(dim);
    e(c) = 1.0;
    u.col(c) = apply(e);
  }
  return u;
}

namespace {

void append_not_all(GateNetwork& net) {
  for (int q = 1; q <= net.n_qubits; ++q) net.gates.push_back(Gate::not_gate(q));
}

GateNetwork odd_network(int interval, double b_z, double b_x) {
  GateNetwork net{3, {}, ""};
  if (interval == 1) {
    const double theta = b_z < 0.0 ? 0.0 : (b_z > 0.0 ? std::numbers::pi / 2.0 : std::numbers::pi / 4.0);
    net.gates = {Gate::rot_y(1, theta), Gate::cnot(1, 2), Gate::cnot(1, 3), Gate::not_gate(2)};
    return net;
  }
  net.gates = {Gate::rot_y(2, mixing_angle_odd(b_z, b_x).phi)};
  if (interval == 2) append_not_all(net);
  return net;
}

GateNetwork even_network(int interval, double b_z, double b_x) {
  GateNetwork net{4, {}, ""};
  if (interval == 0 || interval == 3) {
    const double phi = mixing_angle_even(b_z, b_x, EvenBranch::NearTwo).phi;
    net.gates = {Gate::rot_y(2, phi), Gate::controlled_rot_y(2, 3, -std::numbers::pi / 4.0), Gate::cnot(3, 2)};
  } else {
    const double phi = mixing_angle_even(b_z, b_x, EvenBranch::NearOne).phi;
    net.gates = {Gate::hadamard(2),
                 Gate::not_gate(3),
                 Gate::cnot(2, 3),
                 Gate::controlled_rot_y(2, 4, phi),
                 Gate::swap(2, 3),
                 Gate::controlled_rot_y(2, 1, phi),
                 Gate::swap(2, 3)};
  }
  if (interval >= 2) append_not_all(net);
  return net;
}

int required_qubits(Parity parity) { return parity == Parity::Odd ? 3 : 4; }

std::string parity_name(Parity parity) { return parity == Parity::Odd ? "odd" : "even"; }

}  // namespace

GateNetwork build_preparation_network(Parity parity, int interval, double b_z, double b_x) {
  if (!(b_x > 0.0)) throw InputError(fmt::format("preparation network: b_x must be > 0, got {}", b_x));
  const auto intervals = field_intervals(parity);
  if (interval < 0 || interval >= static_cast<int>(intervals.size())) {
    throw InputError(fmt::format("preparation network: no interval {} for {} chains", interval, parity_name(parity)));
  }
  const FieldInterval& piece = intervals[static_cast<std::size_t>(interval)];
  if (interval_index(parity, b_z) != interval) {
    throw InputError(fmt::format("preparation network: b_z = {} is outside {}", b_z, piece.label()));
  }
  GateNetwork net = parity == Parity::Odd ? odd_network(interval, b_z, b_x) : even_network(interval, b_z, b_x);
  net.label = fmt::format("{} {}", parity_name(parity), piece.label());
  return net;
}

GateNetwork build_preparation_network(int n_qubits, double b_z, double b_x) {
  const Parity parity = parity_of(n_qubits);
  if (n_qubits != required_qubits(parity)) {
    throw UnsupportedError(fmt::format("preparation networks exist for N = 3 and N = 4 only, got N = {}", n_qubits));
  }
  return build_preparation_network(parity, interval_index(parity, b_z), b_z, b_x);
}

GateNetwork build_protocol_network(const GateNetwork& preparation, double epsilon, double tau) {
  preparation.validate();
  GateNetwork out{preparation.n_qubits, preparation.gates, preparation.label.empty() ? "" : preparation.label + " protocol"};
  out.gates.push_back(Gate::global_z_evolution(preparation.n_qubits, tau * epsilon));
  const GateNetwork back = preparation.inverse();
  out.gates.insert(out.gates.end(), back.gates.begin(), back.gates.end());
  return out;
}

GateNetwork cancel_commuting_swaps(const GateNetwork& network) {
  network.validate();
  GateNetwork out = network;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < out.gates.size() && !changed; ++i) {
      if (out.gates[i].kind != GateKind::Swap) continue;
      for (std::size_t j = i + 1; j < out.gates.size(); ++j) {
        if (out.gates[j].kind != GateKind::Swap) continue;
        const auto& a = out.gates[i].targets;
        const auto& b = out.gates[j].targets;
        const bool same = (a == b) || (a[0] == b[1] && a[1] == b[0]);
        if (!same) break;
        GateNetwork middle{out.n_qubits, {out.gates.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                          out.gates.begin() + static_cast<std::ptrdiff_t>(j)}, ""};
        const Matrix m = middle.unitary();
        const Matrix s = gate_matrix(out.gates[i], out.n_qubits);
        if ((s * m * s - m).cwiseAbs().maxCoeff() <= 1e-12) {
          out.gates.erase(out.gates.begin() + static_cast<std::ptrdiff_t>(j));
          out.gates.erase(out.gates.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
        }
        break;
      }
    }
  }
  return out;
}

ReadoutResult readout(const DensityMatrix& rho, int qubit) {
  const int n = rho.n_qubits();
  if (qubit < 1 || qubit > n) throw InputError(fmt::format("readout qubit {} outside [1, {}]", qubit, n));
  const DensityMatrix d = dephase(rho);
  const double ss = d.population(0);
  const double nn = d.population(qubit_mask(n, qubit));
  return {qubit, ss - nn, ss};
}

ReadoutResult run_protocol(const GateNetwork& preparation, double epsilon, double tau, int readout_qubit) {
  const int n = preparation.n_qubits;
  if (readout_qubit < 1 || readout_qubit > n) {
    throw InputError(fmt::format("readout qubit {} outside [1, {}]", readout_qubit, n));
  }
  const GateNetwork protocol = build_protocol_network(preparation, epsilon, tau);
  const PureState psi = protocol.apply(PureState::basis(n, 0));
  return readout(DensityMatrix::from_pure(psi), readout_qubit);
}

ReadoutResult protocol_readout(int n_qubits, double b_z, double b_x, double epsilon, double tau, int readout_qubit) {
  return run_protocol(build_preparation_network(n_qubits, b_z, b_x), epsilon, tau, readout_qubit);
}

double protocol_vs_exact(int n_qubits, double b_x, double epsilon, double tau, int interval, double step) {
  const Parity parity = parity_of(n_qubits);
  if (n_qubits != required_qubits(parity)) {
    throw UnsupportedError(fmt::format("protocol_vs_exact: N must be 3 or 4, got {}", n_qubits));
  }
  const auto intervals = field_intervals(parity);
  if (interval < 0 || interval >= static_cast<int>(intervals.size())) {
    throw InputError(fmt::format("protocol_vs_exact: no interval {}", interval));
  }
  const FieldInterval& piece = intervals[static_cast<std::size_t>(interval)];
  SpectralCache cache;
  double worst = 0.0;
  for (double b_z : make_grid(piece.lo, piece.hi, step)) {
    if (!piece.contains(b_z)) continue;
    const auto net = build_preparation_network(parity, interval, b_z, b_x);
    const double l = run_protocol(net, epsilon, tau, 1).l_value;
    const double exact = loschmidt_echo_exact_ground({n_qubits, b_z, b_x}, epsilon, tau, &cache);
    worst = std::max(worst, std::abs(l - exact));
  }
  return worst;
}

namespace {

std::string join_qubits(const std::vector<int>& qubits) {
  std::string out;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(qubits[i]);
  }
  return out;
}

std::vector<int> split_qubits(const std::string& field, int line_no) {
  std::vector<int> out;
  std::stringstream ss(field);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(fmt::format("network line {}: bad qubit list '{}'", line_no, field));
    }
  }
  if (out.empty()) throw InputError(fmt::format("network line {}: empty qubit list", line_no));
  return out;
}

bool takes_controls(GateKind kind) { return kind == GateKind::Cnot || kind == GateKind::ControlledRotY; }

}  // namespace

std::string serialize_network(const GateNetwork& network) {
  std::string out = fmt::format("NETWORK {}", network.n_qubits);
  if (!network.label.empty()) out += " " + network.label;
  out += '\n';
  for (const auto& g : network.gates) {
    out += fmt::format("GATE {} {}", gate_kind_name(g.kind), join_qubits(g.targets));
    if (takes_controls(g.kind)) out += " " + join_qubits(g.controls);
    if (g.has_angle()) out += fmt::format(" {:.17g}", g.angle);
    out += '\n';
  }
  return out;
}

GateNetwork parse_network(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool have_header = false;
  GateNetwork net;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    if (word == "NETWORK") {
      if (have_header) throw InputError(fmt::format("network line {}: duplicate NETWORK header", line_no));
      if (!(fields >> net.n_qubits)) throw InputError(fmt::format("network line {}: missing qubit count", line_no));
      std::getline(fields >> std::ws, net.label);
      check_qubit_count(net.n_qubits);
      have_header = true;
      continue;
    }
    if (word != "GATE") throw InputError(fmt::format("network line {}: expected GATE, got '{}'", line_no, word));
    if (!have_header) throw InputError(fmt::format("network line {}: GATE before NETWORK header", line_no));
    std::string kind_name, targets;
    if (!(fields >> kind_name >> targets)) throw InputError(fmt::format("network line {}: incomplete gate", line_no));
    Gate g{gate_kind_from_name(kind_name), split_qubits(targets, line_no), {}, 0.0};
    if (takes_controls(g.kind)) {
      std::string controls;
      if (!(fields >> controls)) throw InputError(fmt::format("network line {}: missing controls", line_no));
      g.controls = split_qubits(controls, line_no);
    }
    if (g.has_angle()) {
      std::string angle;
      if (!(fields >> angle)) throw InputError(fmt::format("network line {}: missing angle", line_no));
      try {
        std::size_t used = 0;
        g.angle = std::stod(angle, &used);
        if (used != angle.size()) throw std::invalid_argument(angle);
      } catch (const std::exception&) {
        throw InputError(fmt::format("network line {}: bad angle '{}'", line_no, angle));
      }
    }
    std::string extra;
    if (fields >> extra) throw InputError(fmt::format("network line {}: unexpected '{}'", line_no, extra));
    g.validate(net.n_qubits);
    net.gates.push_back(std::move(g));
  }
  if (!have_header) throw InputError("network text has no NETWORK header");
  return net;
}

}  // namespace isingecho
