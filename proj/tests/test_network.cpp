#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "isingecho/network.hpp"
#include "support.hpp"

using namespace isingecho;
using testsupport::max_abs;

namespace {

constexpr double kPi = std::numbers::pi;

std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(ISINGECHO_GOLDEN_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_comments(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out += line + '\n';
  }
  return out;
}

// U0 as a dense product of embedded gate matrices.
Matrix dense_network(const GateNetwork& net) {
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(net.n_qubits));
  Matrix u = Matrix::Identity(dim, dim);
  for (const auto& g : net.gates) u = gate_matrix(g, net.n_qubits) * u;
  return u;
}

struct ProtocolOracle {
  double l_value;
  double rho_nn;
};

ProtocolOracle protocol_oracle(const GateNetwork& prep, double eps, double tau, int qubit) {
  const int n = prep.n_qubits;
  const Matrix u0 = dense_network(prep);
  const Matrix t = trotter_echo_operator(n, eps, tau).dense();
  const Vector psi = u0.adjoint() * t * u0.col(0);
  return {std::norm(psi(0)), std::norm(psi(static_cast<Eigen::Index>(qubit_mask(n, qubit))))};
}

}  // namespace

TEST_CASE("preparation networks reproduce the approximate ground states exactly") {
  for (int n : {3, 4}) {
    for (double bx : {0.05, 0.1, 0.3}) {
      for (double bz : make_grid(-3.0, 3.0, 0.01)) {
        const GateNetwork net = build_preparation_network(n, bz, bx);
        const double f = fidelity(net.apply(PureState::basis(n, 0)), ground_state_approx(n, bz, bx));
        REQUIRE(f >= 1.0 - 1e-10);
      }
    }
  }
}

TEST_CASE("preparation network examples") {
  const GateNetwork low = build_preparation_network(Parity::Odd, 0, -2.0, 0.1);
  const double r = std::cos(kPi / 4);
  const Vector expected = r * basis_state(3, "000").amplitudes() - r * basis_state(3, "010").amplitudes();
  CHECK(std::abs(overlap(PureState(3, expected), low.apply(PureState::basis(3, 0))) - 1.0) < 1e-14);

  const GateNetwork deep = build_preparation_network(Parity::Even, 0, -3.0, 0.1);
  CHECK(fidelity(deep.apply(PureState::basis(4, 0)), basis_state(4, "0000")) > 0.99);

  const GateNetwork mid = build_preparation_network(Parity::Odd, 1, 0.0, 0.1);
  REQUIRE(mid.gates.front().kind == GateKind::RotY);
  CHECK(mid.gates.front().angle == doctest::Approx(kPi / 4));
  const Vector cat = (basis_state(3, "010").amplitudes() - basis_state(3, "101").amplitudes()) / std::sqrt(2.0);
  CHECK(fidelity(mid.apply(PureState::basis(3, 0)), PureState(3, cat)) == doctest::Approx(1.0));

  CHECK(build_preparation_network(Parity::Odd, 1, -0.5, 0.1).gates.front().angle == 0.0);
  CHECK(build_preparation_network(Parity::Odd, 1, 0.5, 0.1).gates.front().angle == doctest::Approx(kPi / 2));
  CHECK(build_preparation_network(Parity::Even, 2, 0.5, 0.1).label == "even (0,1.44)");
}

TEST_CASE("preparation network errors") {
  CHECK_THROWS_AS(build_preparation_network(5, 0.0, 0.1), UnsupportedError);
  CHECK_THROWS_AS(build_preparation_network(6, 0.0, 0.1), UnsupportedError);
  CHECK_THROWS_AS(build_preparation_network(3, 0.0, 0.0), InputError);
  CHECK_THROWS_AS(build_preparation_network(Parity::Odd, 0, 0.0, 0.1), InputError);
  CHECK_THROWS_AS(build_preparation_network(Parity::Even, 4, 2.0, 0.1), InputError);
}

TEST_CASE("network unitaries and inverses") {
  for (int n : {3, 4}) {
    for (double bz : {-2.5, -1.2, -0.3, 0.0, 0.7, 1.5, 2.9}) {
      const GateNetwork net = build_preparation_network(n, bz, 0.1);
      const Matrix u = net.unitary();
      const auto dim = u.rows();
      CHECK(max_abs(u.adjoint() * u - Matrix::Identity(dim, dim)) <= 1e-10);
      CHECK(max_abs(u - dense_network(net)) <= 1e-13);
      CHECK(max_abs(net.inverse().unitary() * u - Matrix::Identity(dim, dim)) <= 1e-12);
    }
  }
}

TEST_CASE("run_protocol examples") {
  for (int n : {3, 4}) {
    for (double bz : {-2.0, -0.6, 0.0, 1.3}) {
      const ReadoutResult r = run_protocol(build_preparation_network(n, bz, 0.1), 0.0, kPi, 2);
      CHECK(r.amplitude == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(r.l_value == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  const GateNetwork prep = build_preparation_network(3, -2.0, 0.1);
  const ReadoutResult at = run_protocol(prep, 0.2, kPi, 2);
  const ProtocolOracle o = protocol_oracle(prep, 0.2, kPi, 2);
  CHECK(at.qubit == 2);
  CHECK(at.l_value == doctest::Approx(o.l_value).epsilon(1e-12));
  CHECK(at.amplitude == doctest::Approx(o.l_value - o.rho_nn).epsilon(1e-12));
  for (double neighbour : {-2.02, -1.98}) {
    CHECK(at.amplitude < protocol_readout(3, neighbour, 0.1, 0.2, kPi, 2).amplitude);
  }

  CHECK(readout(DensityMatrix::maximally_mixed(3), 2).amplitude == 0.0);
  CHECK(readout(DensityMatrix::maximally_mixed(4), 4).amplitude == 0.0);
  CHECK_THROWS_AS(run_protocol(prep, 0.2, kPi, 0), InputError);
  CHECK_THROWS_AS(run_protocol(prep, 0.2, kPi, 4), InputError);
  CHECK_THROWS_AS(readout(DensityMatrix::maximally_mixed(3), 5), InputError);
}

TEST_CASE("protocol readout obeys A <= l_value and matches the dense oracle (property)") {
  auto g = testsupport::rng(51);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = testsupport::uniform_int(g, 3, 4);
    const double bz = testsupport::uniform(g, -3.0, 3.0);
    const double bx = testsupport::uniform(g, 0.02, 0.5);
    const double eps = testsupport::uniform(g, -0.6, 0.6);
    const double tau = testsupport::uniform(g, 0.0, 4.0);
    const int q = testsupport::uniform_int(g, 1, n);
    const GateNetwork prep = build_preparation_network(n, bz, bx);
    const ReadoutResult r = run_protocol(prep, eps, tau, q);
    const ProtocolOracle o = protocol_oracle(prep, eps, tau, q);
    REQUIRE(r.amplitude <= r.l_value + 1e-12);
    REQUIRE(std::abs(r.l_value - o.l_value) <= 1e-12);
    REQUIRE(std::abs(r.amplitude - (o.l_value - o.rho_nn)) <= 1e-12);
    // l_value is the trotterized echo of the prepared state.
    const PureState psi = ground_state_approx(n, bz, bx);
    const double direct = std::norm(psi.amplitudes().dot(trotter_echo_operator(n, eps, tau).apply(psi.amplitudes())));
    REQUIRE(std::abs(r.l_value - direct) <= 1e-12);
  }
}

TEST_CASE("gate merge: CNOT(2->1) exp(-i a sz1) CNOT(2->1) = exp(-i a sz1 sz2)") {
  for (double a : {0.0, 0.2 * kPi, -1.3, 2.7}) {
    const Matrix cnot = gate_matrix(Gate::cnot(2, 1), 2);
    const Matrix merged = cnot * gate_matrix(Gate::z_evolution(1, a), 2) * cnot;
    CHECK(max_abs(merged - gate_matrix(Gate::zz_evolution(1, 2, a), 2)) <= 1e-12);
  }
}

TEST_CASE("protocol and exact-echo minima coincide within one grid step") {
  struct Setting {
    int n;
    double eps, tau;
  };
  for (Setting s : {Setting{3, 0.2, kPi}, Setting{3, 0.125, kPi}, Setting{4, 0.5, kPi / 2}, Setting{4, 0.4, kPi / 2}}) {
    ScanRequest r;
    r.n_qubits = s.n;
    r.epsilon = s.eps;
    r.tau = s.tau;
    r.b_z = make_grid(-3.0, 3.0, kDefaultGridStep);
    const EchoScan exact = echo_scan(r);
    r.kind = ValueKind::ReadoutAmplitude;
    r.source = InitialState::ApproxGround;
    const EchoScan protocol = echo_scan(r);
    REQUIRE(exact.minima.size() == protocol.minima.size());
    for (std::size_t i = 0; i < exact.minima.size(); ++i) {
      CHECK(std::abs(exact.minima[i].b_z - protocol.minima[i].b_z) <= kDefaultGridStep);
    }
  }
}

TEST_CASE("protocol_vs_exact") {
  for (int interval = 0; interval < 3; ++interval) CHECK(protocol_vs_exact(3, 0.1, 0.0, kPi, interval) < 1e-12);
  for (int interval = 0; interval < 4; ++interval) CHECK(protocol_vs_exact(4, 0.1, 0.0, kPi / 2, interval) < 1e-12);
  CHECK_THROWS_AS(protocol_vs_exact(5, 0.1, 0.1, kPi, 0), UnsupportedError);
  CHECK_THROWS_AS(protocol_vs_exact(3, 0.1, 0.1, kPi, 3), InputError);

  struct Setting {
    int n;
    double eps, tau, lo, hi;
  };
  for (Setting s : {Setting{3, 0.2, kPi, -3.0, -1.0}, Setting{4, 0.5, kPi / 2, -3.0, -1.44}}) {
    const double d = protocol_vs_exact(s.n, 0.1, s.eps, s.tau, 0);
    MESSAGE("N=", s.n, " interval 0 max |l_value - L_exact| = ", d);
    std::vector<ScanPoint> protocol, exact;
    for (double bz : make_grid(s.lo, s.hi, 0.005)) {
      protocol.push_back({bz, protocol_readout(s.n, bz, 0.1, s.eps, s.tau, 1).l_value});
      exact.push_back({bz, loschmidt_echo_exact_ground({s.n, bz, 0.1}, s.eps, s.tau)});
    }
    const auto a = find_minima(protocol, {kDefaultMinProminence});
    const auto b = find_minima(exact, {kDefaultMinProminence});
    REQUIRE(a.size() == 1);
    REQUIRE(b.size() == 1);
    CHECK(std::abs(a[0].b_z - b[0].b_z) <= 0.15);
  }
}

TEST_CASE("SWAP cancellation") {
  const GateNetwork prep = build_preparation_network(4, -0.8, 0.1);
  CHECK(cancel_commuting_swaps(prep).gates.size() == prep.gates.size());

  const GateNetwork protocol = build_protocol_network(prep, 0.5, kPi / 2);
  const GateNetwork reduced = cancel_commuting_swaps(protocol);
  CHECK(reduced.gates.size() == protocol.gates.size() - 2);
  const Matrix u = protocol.unitary();
  const Matrix v = reduced.unitary();
  for (Eigen::Index c = 0; c < u.cols(); ++c) CHECK(std::norm(u.col(c).dot(v.col(c))) >= 1.0 - 1e-10);

  GateNetwork blocked{3, {Gate::swap(1, 2), Gate::not_gate(1), Gate::swap(2, 1)}, ""};
  CHECK(cancel_commuting_swaps(blocked).gates.size() == 3);
  GateNetwork free{3, {Gate::swap(1, 2), Gate::not_gate(3), Gate::swap(2, 1)}, ""};
  CHECK(cancel_commuting_swaps(free).gates.size() == 1);
}

TEST_CASE("network text form matches the golden files") {
  struct Case {
    const char* file;
    int n;
    double bz;
  };
  for (Case c : {Case{"odd_low_bz-2.net", 3, -2.0}, Case{"odd_mid_bz0.net", 3, 0.0}, Case{"odd_high_bz2.net", 3, 2.0},
                 Case{"even_low_bz-2.net", 4, -2.0}, Case{"even_mid_bz-1.net", 4, -1.0},
                 Case{"even_mid_bz1.net", 4, 1.0}}) {
    CAPTURE(c.file);
    const std::string golden = read_golden(c.file);
    const GateNetwork built = build_preparation_network(c.n, c.bz, 0.1);
    CHECK(serialize_network(built) == strip_comments(golden));
    const GateNetwork parsed = parse_network(golden);
    CHECK(parsed.n_qubits == built.n_qubits);
    CHECK(parsed.label == built.label);
    CHECK(parsed.gates == built.gates);
  }
}

TEST_CASE("network text round trip and parse errors") {
  const GateNetwork protocol = build_protocol_network(build_preparation_network(4, 2.2, 0.1), 0.4, kPi / 2);
  const GateNetwork back = parse_network(serialize_network(protocol));
  CHECK(back.gates == protocol.gates);
  CHECK(back.label == protocol.label);

  CHECK_THROWS_AS(parse_network(""), InputError);
  CHECK_THROWS_AS(parse_network("GATE NOT 1\n"), InputError);
  CHECK_THROWS_AS(parse_network("NETWORK 2\nGATE NOT 3\n"), InputError);
  CHECK_THROWS_AS(parse_network("NETWORK 2\nGATE ROTY 1\n"), InputError);
  CHECK_THROWS_AS(parse_network("NETWORK 2\nGATE ROTY 1 abc\n"), InputError);
  CHECK_THROWS_AS(parse_network("NETWORK 2\nGATE CNOT 1\n"), InputError);
  CHECK_THROWS_AS(parse_network("NETWORK 2\nGATE NOT 1 2\n"), InputError);
  CHECK_THROWS_AS(parse_network("NETWORK 2\nGATE FOO 1\n"), InputError);
  CHECK_THROWS_AS(parse_network("NETWORK 2\nNETWORK 2\n"), InputError);
  CHECK_THROWS_AS(parse_network("NETWORK 2\nBOGUS\n"), InputError);
  const GateNetwork crlf = parse_network("# c\r\nNETWORK 2 x\r\nGATE SWAP 1,2\r\n");
  CHECK(crlf.label == "x");
  CHECK(crlf.gates.size() == 1);
}
