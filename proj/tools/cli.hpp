#pragma once

// Command layer of the isingecho tool: one function per subcommand producing
// a table, and CSV / JSON renderers for it.
//
//   spectrum       b_z, E0, E1, gap [, closed_form_E0 when b_x = 0 and N >= 3]
//   echo-scan      b_z, value                       + minima of value
//   lz             lambda, gap, matrix_element_sq, gaussian_echo, two_level_echo
//                  (the --bz-* grid is the lambda grid, t = --tau)
//   protocol       b_z, A, l_value, fidelity_prepared_vs_exact   + minima of A
//   phase-diagram  b_z, phase_index, closed_form_E0, gap, exact_echo + minima of exact_echo

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "isingecho/criticality.hpp"

namespace isingecho::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string command;
  int n_qubits = 3;
  double bz_min = -3.0;
  double bz_max = 3.0;
  double bz_step = kDefaultGridStep;
  double b_x = 0.1;
  double epsilon = 0.1;
  double tau = 3.141592653589793;
  std::string value_kind = "exact_echo";
  std::string initial_state = "exact_ground";
  double z_nu = 1.0;
  double delta_min = 1.0;
  int readout_qubit = 2;
  unsigned threads = 1;
  std::string format = "csv";
  std::string out;  // empty: standard output
  std::uint64_t seed = 0;

  // Throws InputError on inconsistent settings.
  void validate() const;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::optional<std::vector<Minimum>> minima;
  std::vector<std::pair<std::string, std::string>> notes;
};

Table cmd_spectrum(const RunConfig& config);
Table cmd_echo_scan(const RunConfig& config);
Table cmd_lz(const RunConfig& config);
Table cmd_protocol(const RunConfig& config);
Table cmd_phase_diagram(const RunConfig& config);

Table run_command(const RunConfig& config);

// Numbers are written with 12 significant digits.
std::string format_number(double x);
std::string render_csv(const RunConfig& config, const Table& table);
std::string render_json(const RunConfig& config, const Table& table);

// Parses argv, runs the command and writes to config.out or `out`.
// Diagnostics go to `err`. Returns one of the kExit* codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isingecho::cli
