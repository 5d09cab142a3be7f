#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "isingecho/network.hpp"
#include "isingecho/perturbation.hpp"
#include "json.hpp"

namespace isingecho::cli {

namespace {

const std::vector<std::string> kCommands{"spectrum", "echo-scan", "lz", "protocol", "phase-diagram"};

bool is_protocol_size(int n) { return n == 3 || n == 4; }

std::vector<double> grid_of(const RunConfig& c) { return make_grid(c.bz_min, c.bz_max, c.bz_step); }

std::vector<std::pair<std::string, std::string>> config_fields(const RunConfig& c) {
  return {{"command", c.command},
          {"n", std::to_string(c.n_qubits)},
          {"bz_min", format_number(c.bz_min)},
          {"bz_max", format_number(c.bz_max)},
          {"bz_step", format_number(c.bz_step)},
          {"bx", format_number(c.b_x)},
          {"epsilon", format_number(c.epsilon)},
          {"tau", format_number(c.tau)},
          {"value_kind", c.value_kind},
          {"initial_state", c.initial_state},
          {"znu", format_number(c.z_nu)},
          {"delta_min", format_number(c.delta_min)},
          {"readout_qubit", std::to_string(c.readout_qubit)},
          {"threads", std::to_string(c.threads)},
          {"format", c.format},
          {"out", c.out},
          {"seed", std::to_string(c.seed)}};
}

nlohmann::json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(format_number(x));
}

}  // namespace

void RunConfig::validate() const {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
    throw InputError(fmt::format("unknown command '{}'", command));
  }
  if (!(bz_step > 0.0)) throw InputError(fmt::format("--bz-step must be > 0, got {}", bz_step));
  if (!(bz_min < bz_max)) throw InputError(fmt::format("--bz-min must be < --bz-max, got [{}, {}]", bz_min, bz_max));
  if (format != "csv" && format != "json") throw InputError(fmt::format("--format must be csv or json, got '{}'", format));
  value_kind_from_name(value_kind);
  initial_state_from_name(initial_state);
  if (command == "lz") {
    LandauZenerParams{delta_min, 0.0, z_nu, epsilon, tau}.validate();
    return;
  }
  check_qubit_count(n_qubits);
  if (command == "protocol") {
    if (!is_protocol_size(n_qubits)) {
      throw UnsupportedError(fmt::format("protocol networks exist for N = 3 and N = 4 only, got N = {}", n_qubits));
    }
    if (!(b_x > 0.0)) throw InputError("protocol needs --bx > 0");
  }
  if (command == "protocol" || value_kind == "readout_amplitude") {
    if (readout_qubit < 1 || readout_qubit > n_qubits) {
      throw InputError(fmt::format("--readout-qubit must be in [1, {}], got {}", n_qubits, readout_qubit));
    }
  }
  if (command == "phase-diagram" && n_qubits < 3) {
    throw UnsupportedError("phase-diagram needs N >= 3 for the closed-form phases");
  }
}

Table cmd_spectrum(const RunConfig& c) {
  const bool closed = c.b_x == 0.0 && c.n_qubits >= 3;
  Table t;
  t.columns = {"b_z", "E0", "E1", "gap"};
  if (closed) t.columns.push_back("closed_form_E0");
  for (double bz : grid_of(c)) {
    const ChainParams p{c.n_qubits, bz, c.b_x};
    const Eigen::VectorXd e = eigenvalues(build_hamiltonian(p));
    const double e1 = e.size() > 1 ? e(1) : e(0);
    std::vector<double> row{bz, e(0), e1, std::max(0.0, e1 - e(0))};
    if (closed) row.push_back(closed_form_energy(p));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_echo_scan(const RunConfig& c) {
  ScanRequest r;
  r.n_qubits = c.n_qubits;
  r.b_x = c.b_x;
  r.epsilon = c.epsilon;
  r.tau = c.tau;
  r.b_z = grid_of(c);
  r.kind = value_kind_from_name(c.value_kind);
  r.source = initial_state_from_name(c.initial_state);
  r.readout_qubit = c.readout_qubit;
  r.threads = c.threads;
  const EchoScan scan = echo_scan(r);
  Table t;
  t.columns = {"b_z", "value"};
  for (const auto& p : scan.grid) t.rows.push_back({p.b_z, p.value});
  t.minima = scan.minima;
  return t;
}

Table cmd_lz(const RunConfig& c) {
  Table t;
  t.columns = {"lambda", "gap", "matrix_element_sq", "gaussian_echo", "two_level_echo"};
  const HermitianOperator v = lz_perturbation();
  for (double lambda : grid_of(c)) {
    const LandauZenerParams p{c.delta_min, lambda, c.z_nu, c.epsilon, c.tau};
    const double two = echo_two_level(diagonalize(lz_hamiltonian(p)), v, c.epsilon, c.tau);
    t.rows.push_back({lambda, lz_gap(p), lz_matrix_element_sq(p), lz_echo_gaussian(p), two});
  }
  return t;
}

Table cmd_protocol(const RunConfig& c) {
  Table t;
  t.columns = {"b_z", "A", "l_value", "fidelity_prepared_vs_exact"};
  std::vector<ScanPoint> amplitude;
  for (double bz : grid_of(c)) {
    const GateNetwork prep = build_preparation_network(c.n_qubits, bz, c.b_x);
    const ReadoutResult r = run_protocol(prep, c.epsilon, c.tau, c.readout_qubit);
    const PureState exact = diagonalize(build_hamiltonian({c.n_qubits, bz, c.b_x})).eigenstate(0);
    const double f = fidelity(prep.apply(PureState::basis(c.n_qubits, 0)), exact);
    t.rows.push_back({bz, r.amplitude, r.l_value, f});
    amplitude.push_back({bz, r.amplitude});
  }
  if (amplitude.size() >= 3) {
    t.minima = find_minima(amplitude, {kDefaultMinProminence, kScanNoiseFloor});
  } else {
    t.minima = std::vector<Minimum>{};
  }
  for (const auto& piece : field_intervals(parity_of(c.n_qubits))) t.notes.push_back({"interval", piece.label()});
  return t;
}

Table cmd_phase_diagram(const RunConfig& c) {
  Table t;
  t.columns = {"b_z", "phase_index", "closed_form_E0", "gap", "exact_echo"};
  SpectralCache cache;
  std::vector<ScanPoint> echo;
  for (double bz : grid_of(c)) {
    const double l = loschmidt_echo_exact_ground({c.n_qubits, bz, c.b_x}, c.epsilon, c.tau, &cache);
    t.rows.push_back({bz, static_cast<double>(phase_index(c.n_qubits, bz)), closed_form_energy({c.n_qubits, bz, 0.0}),
                      gap({c.n_qubits, bz, c.b_x}), l});
    echo.push_back({bz, l});
  }
  t.minima = echo.size() >= 3 ? find_minima(echo, {kDefaultMinProminence, kScanNoiseFloor}) : std::vector<Minimum>{};
  for (double bc : crossover_points(c.n_qubits)) t.notes.push_back({"crossover", format_number(bc)});
  return t;
}

Table run_command(const RunConfig& c) {
  c.validate();
  if (c.command == "spectrum") return cmd_spectrum(c);
  if (c.command == "echo-scan") return cmd_echo_scan(c);
  if (c.command == "lz") return cmd_lz(c);
  if (c.command == "protocol") return cmd_protocol(c);
  return cmd_phase_diagram(c);
}

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;
  return fmt::format("{:.12g}", x);
}

std::string render_csv(const RunConfig& c, const Table& t) {
  std::string out = fmt::format("# isingecho {} schema_version={}\n", c.command, kSchemaVersion);
  for (const auto& [k, v] : config_fields(c)) out += fmt::format("# {}={}\n", k, v);
  for (const auto& [k, v] : t.notes) out += fmt::format("# {}={}\n", k, v);
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
    out += '\n';
  }
  if (t.minima) {
    out += "# minima: b_z,value,index\n";
    for (const auto& m : *t.minima) {
      out += fmt::format("# minimum,{},{},{}\n", format_number(m.b_z), format_number(m.value), m.index);
    }
  }
  return out;
}

std::string render_json(const RunConfig& c, const Table& t) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  nlohmann::ordered_json config;
  config["command"] = c.command;
  config["n"] = c.n_qubits;
  config["bz_min"] = json_number(c.bz_min);
  config["bz_max"] = json_number(c.bz_max);
  config["bz_step"] = json_number(c.bz_step);
  config["bx"] = json_number(c.b_x);
  config["epsilon"] = json_number(c.epsilon);
  config["tau"] = json_number(c.tau);
  config["value_kind"] = c.value_kind;
  config["initial_state"] = c.initial_state;
  config["znu"] = json_number(c.z_nu);
  config["delta_min"] = json_number(c.delta_min);
  config["readout_qubit"] = c.readout_qubit;
  config["threads"] = c.threads;
  config["format"] = c.format;
  config["out"] = c.out;
  config["seed"] = c.seed;
  doc["config"] = config;
  if (!t.notes.empty()) {
    nlohmann::ordered_json notes = nlohmann::ordered_json::array();
    for (const auto& [k, v] : t.notes) notes.push_back({{"key", k}, {"value", v}});
    doc["notes"] = notes;
  }
  doc["columns"] = t.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = json_number(row[i]);
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  nlohmann::ordered_json minima = nlohmann::ordered_json::array();
  if (t.minima) {
    for (const auto& m : *t.minima) {
      minima.push_back({{"b_z", json_number(m.b_z)}, {"value", json_number(m.value)}, {"index", m.index}});
    }
  }
  doc["minima"] = std::move(minima);
  return doc.dump(2) + "\n";
}

namespace {

void add_options(CLI::App& sub, RunConfig& c) {
  sub.add_option("--n", c.n_qubits, "chain length N")->capture_default_str();
  sub.add_option("--bz-min", c.bz_min, "grid start (B_z, or lambda for lz)")->capture_default_str();
  sub.add_option("--bz-max", c.bz_max, "grid end")->capture_default_str();
  sub.add_option("--bz-step", c.bz_step, "grid step")->capture_default_str();
  sub.add_option("--bx", c.b_x, "transverse field B_x")->capture_default_str();
  sub.add_option("--epsilon", c.epsilon, "perturbation strength")->capture_default_str();
  sub.add_option("--tau", c.tau, "echo time")->capture_default_str();
  sub.add_option("--value-kind", c.value_kind,
                 "exact_echo | perturbative_echo | two_level_echo | readout_amplitude")
      ->capture_default_str();
  sub.add_option("--initial-state", c.initial_state, "exact_ground | approx_ground")->capture_default_str();
  sub.add_option("--znu", c.z_nu, "critical exponent product z nu (lz)")->capture_default_str();
  sub.add_option("--delta-min", c.delta_min, "minimum gap (lz)")->capture_default_str();
  sub.add_option("--readout-qubit", c.readout_qubit, "qubit read out by the protocol")->capture_default_str();
  sub.add_option("--threads", c.threads, "worker threads for echo-scan")->capture_default_str();
  sub.add_option("--format", c.format, "csv | json")->capture_default_str();
  sub.add_option("--out", c.out, "output file (default: standard output)");
  sub.add_option("--seed", c.seed, "recorded in the output metadata")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Loschmidt-echo detection of critical points in the tilted-field Ising chain", "isingecho"};
  app.require_subcommand(1);
  RunConfig config;
  const std::pair<const char*, const char*> commands[] = {
      {"spectrum", "two lowest levels and gap over a B_z grid"},
      {"echo-scan", "echo value over a B_z grid with its minima"},
      {"lz", "Landau-Zener gap, matrix element and echoes over a lambda grid"},
      {"protocol", "gate-network readout A over a B_z grid (N = 3, 4)"},
      {"phase-diagram", "B_x = 0 phases, gap and exact echo over a B_z grid"}};
  for (const auto& [name, help] : commands) add_options(*app.add_subcommand(name, help), config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  config.command = app.get_subcommands().front()->get_name();

  std::string text;
  try {
    const Table table = run_command(config);
    text = config.format == "json" ? render_json(config, table) : render_csv(config, table);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  if (config.out.empty()) {
    out << text;
    out.flush();
    return out ? kExitOk : kExitIo;
  }
  std::ofstream file(config.out, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot open '" << config.out << "' for writing\n";
    return kExitIo;
  }
  file << text;
  file.close();
  if (!file) {
    err << "error: failed writing '" << config.out << "'\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace isingecho::cli
