#include "doctest.h"
#include "helpers.hpp"

#include "qinit/lower.hpp"
#include "qinit/sim.hpp"
#include "qinit/synth.hpp"

#include <cmath>
#include <cstdlib>

using namespace qinit;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

struct EnvGuard {
  ~EnvGuard() { unsetenv("QINIT_MAX_QUBITS"); }
};

double max_vec_diff(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}
}  // namespace

TEST_CASE("single-gate landmarks") {
  Circuit h1;
  h1.n = 1;
  h1.append(make_gate({}, 1, Named{NamedKind::H}));
  const SimState plus = run(h1);
  CHECK(std::abs(plus.vector(0) - kInvSqrt2) <= 1e-15);
  CHECK(std::abs(plus.vector(1) - kInvSqrt2) <= 1e-15);

  Circuit flip;
  flip.n = 1;
  flip.append(make_gate({}, 1, Rotation{0.0}));
  const SimState minus = run(flip, basis_state(1, 1));
  CHECK(std::abs(minus.vector(0)) == 0.0);
  CHECK(std::abs(minus.vector(1) + 1.0) <= 1e-15);

  SimState half = zero_state(2);
  half.vector(0) = kInvSqrt2;
  half.vector(2) = kInvSqrt2;  // (|00> + |10>)/sqrt(2)
  Circuit cx;
  cx.n = 2;
  cx.append(make_gate({{1, 1}}, 2, Named{NamedKind::X}));
  const SimState bell = run(cx, half);
  CHECK(std::abs(bell.vector(0) - kInvSqrt2) <= 1e-15);
  CHECK(std::abs(bell.vector(3) - kInvSqrt2) <= 1e-15);
  CHECK(std::abs(bell.vector(1)) + std::abs(bell.vector(2)) == 0.0);
}

TEST_CASE("the four-gate cascade prepares the shared-coin state") {
  Circuit c;
  c.n = 4;
  c.append(make_gate({}, 1, Named{NamedKind::H}));
  c.append(make_gate({{1, 1}}, 2, Named{NamedKind::X}));
  c.append(make_gate({{1, 1}, {2, 1}}, 3, Named{NamedKind::X}));
  c.append(make_gate({{1, 1}, {2, 1}, {3, 1}}, 4, Rotation{kPi / 2}));
  const SimState st = run(c);
  CHECK(std::abs(st.vector(0) - kInvSqrt2) <= 1e-12);
  CHECK(std::abs(st.vector(15) - kInvSqrt2) <= 1e-12);
  for (int i = 1; i < 15; ++i) CHECK(std::abs(st.vector(i)) <= 1e-15);
}

TEST_CASE("empty circuits return the initial state") {
  Circuit c;
  c.n = 3;
  CHECK(max_vec_diff(run(c).vector, zero_state(3).vector) == 0.0);
  const SimState some = basis_state(3, 6);
  CHECK(max_vec_diff(run(c, some).vector, basis_state(3, 6).vector) == 0.0);
}

TEST_CASE("zero_state and basis_state") {
  const SimState z = zero_state(3);
  CHECK(z.vector.size() == 8);
  CHECK(z.vector(0) == Complex{1.0, 0.0});
  const SimState b = basis_state(3, 5);
  CHECK(b.vector(5) == Complex{1.0, 0.0});
  CHECK(b.vector.cwiseAbs().sum() == 1.0);
}

TEST_CASE("run matches the dense fold on random circuits") {
  auto gen = qtest::rng(61);
  for (int trial = 0; trial < 24; ++trial) {
    const int n = 1 + trial % 6;
    const Circuit c = qtest::random_circuit(gen, n, 14, 3);
    const Eigen::VectorXcd expected = qtest::naive_run(c, qtest::zero_vector(n));
    CHECK(max_vec_diff(run(c).vector, expected) <= 1e-12);
  }
}

TEST_CASE("fused execution of lowered circuits matches the dense fold") {
  auto gen = qtest::rng(62);
  for (int n : {3, 4, 5}) {
    // Lowered multi-controlled gates produce exactly the five-gate windows
    // the fusion paths target, in every target/control arrangement.
    for (int trial = 0; trial < 6; ++trial) {
      Circuit c;
      c.n = n;
      for (int i = 0; i < 3; ++i)
        for (const ControlledGate& g :
             lower_controlled(qtest::random_gate(gen, n, n - 1), n))
          c.append(g);
      const Eigen::VectorXcd expected = qtest::naive_run(c, qtest::zero_vector(n));
      CHECK(max_vec_diff(run(c).vector, expected) <= 1e-12);
    }
  }
}

TEST_CASE("the lowered double-controlled NOT acts exactly on arbitrary states") {
  auto gen = qtest::rng(63);
  // Every placement of (controls, target) on four wires, random inputs.
  const int arrangements[][3] = {{1, 2, 3}, {2, 3, 1}, {1, 3, 2}, {3, 4, 2}, {2, 4, 1}};
  for (const auto& arr : arrangements) {
    const ControlledGate gate =
        make_gate({{arr[0], 1}, {arr[1], 1}}, arr[2], Named{NamedKind::X});
    Circuit lowered;
    lowered.n = 4;
    for (const ControlledGate& g : lower_controlled(gate, 4)) lowered.append(g);

    Eigen::VectorXcd v(16);
    for (int i = 0; i < 16; ++i) v(i) = qtest::random_complex(gen);
    v.normalize();
    SimState init;
    init.n = 4;
    init.vector = v;
    const Eigen::VectorXcd expected = qtest::brute_operator(4, gate) * v;
    CHECK(max_vec_diff(run(lowered, init).vector, expected) <= 1e-13);
  }
}

TEST_CASE("every gate application preserves the norm") {
  auto gen = qtest::rng(64);
  for (int trial = 0; trial < 10; ++trial) {
    const Circuit c = qtest::random_circuit(gen, 5, 20, 3);
    SimState st = zero_state(5);
    for (const ControlledGate& g : c.gates) {
      apply_in_place(st, g);
      CHECK(std::abs(st.vector.norm() - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("apply is linear and inverted by the adjoint gate") {
  auto gen = qtest::rng(65);
  const ControlledGate g = make_gate({{2, 1}, {4, 0}}, 1, Mat2{qtest::random_unitary2(gen)});
  Eigen::VectorXcd u(16), v(16);
  for (int i = 0; i < 16; ++i) {
    u(i) = qtest::random_complex(gen);
    v(i) = qtest::random_complex(gen);
  }
  const Complex alpha = qtest::random_complex(gen);
  const Complex beta = qtest::random_complex(gen);

  SimState su{4, u}, sv{4, v}, sw{4, alpha * u + beta * v};
  apply_in_place(su, g);
  apply_in_place(sv, g);
  apply_in_place(sw, g);
  CHECK(max_vec_diff(sw.vector, alpha * su.vector + beta * sv.vector) <= 1e-12);

  const Eigen::Matrix2cd m = gate_matrix(g.gate);
  const ControlledGate ginv = make_gate({{2, 1}, {4, 0}}, 1, Mat2{m.adjoint()});
  apply_in_place(su, ginv);
  CHECK(max_vec_diff(su.vector, u) <= 1e-12);
}

TEST_CASE("the NOT fast path agrees with the generic kernel bit for bit") {
  auto gen = qtest::rng(66);
  Eigen::Matrix2cd x;
  x << 0, 1, 1, 0;
  Eigen::VectorXcd v(32);
  for (int i = 0; i < 32; ++i) v(i) = qtest::random_complex(gen);
  SimState a{5, v}, b{5, v};
  apply_in_place(a, make_gate({{2, 1}, {5, 0}}, 3, Named{NamedKind::X}));
  apply_in_place(b, make_gate({{2, 1}, {5, 0}}, 3, Mat2{x}));
  CHECK(max_vec_diff(a.vector, b.vector) == 0.0);
}

TEST_CASE("operator_of builds the dense operator") {
  Circuit h1;
  h1.n = 1;
  h1.append(make_gate({}, 1, Named{NamedKind::H}));
  Eigen::Matrix2cd hmat;
  hmat << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
  CHECK(qtest::max_abs_diff(operator_of(h1), hmat) <= 1e-15);

  auto gen = qtest::rng(67);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 2 + trial % 4;
    const Circuit c = qtest::random_circuit(gen, n, 8, 2);
    CHECK(qtest::max_abs_diff(operator_of(c), qtest::brute_circuit_operator(c)) <= 1e-12);
  }

  Circuit wide;
  wide.n = kOperatorMaxQubits + 1;
  CHECK_THROWS_AS(operator_of(wide), Error);
}

TEST_CASE("operator_equivalent compares circuits as operators") {
  const ControlledGate toffoli = make_gate({{1, 1}, {2, 1}}, 3, Named{NamedKind::X});
  Circuit direct;
  direct.n = 3;
  direct.append(toffoli);
  Circuit lowered;
  lowered.n = 3;
  for (const ControlledGate& g : lower_controlled(toffoli, 3)) lowered.append(g);
  CHECK(operator_equivalent(direct, lowered, 1e-12));

  Circuit other;
  other.n = 3;
  other.append(make_gate({{1, 1}, {2, 1}}, 3, Named{NamedKind::H}));
  CHECK_FALSE(operator_equivalent(direct, other, 1e-12));
}

TEST_CASE("deviation separates componentwise error from overlap") {
  const TargetState t = validate_state(std::vector<Complex>{0.5, 0.5, 0.5, 0.5});
  SimState same{2, t.amplitudes};
  const Deviation d0 = deviation(same, t);
  CHECK(d0.max_abs == 0.0);
  CHECK(std::abs(d0.overlap - Complex{1.0, 0.0}) <= 1e-12);

  // A pure global phase leaves the overlap modulus at 1 but is flagged by
  // the componentwise deviation: preparation here means exact phases.
  const Complex phase = std::polar(1.0, kPi / 3);
  SimState rotated{2, phase * t.amplitudes};
  const Deviation d1 = deviation(rotated, t);
  CHECK(d1.max_abs > 0.4);
  CHECK(std::abs(std::abs(d1.overlap) - 1.0) <= 1e-12);
}

TEST_CASE("the run width cap follows QINIT_MAX_QUBITS") {
  EnvGuard cleanup;
  unsetenv("QINIT_MAX_QUBITS");
  CHECK(run_width_cap() == kRunMaxQubits);

  setenv("QINIT_MAX_QUBITS", "4", 1);
  CHECK(run_width_cap() == 4);
  Circuit c;
  c.n = 5;
  CHECK_THROWS_AS(run(c), Error);

  setenv("QINIT_MAX_QUBITS", "abc", 1);
  CHECK_THROWS_AS(run_width_cap(), Error);
  setenv("QINIT_MAX_QUBITS", "0", 1);
  CHECK_THROWS_AS(run_width_cap(), Error);
  setenv("QINIT_MAX_QUBITS", "31", 1);
  CHECK_THROWS_AS(run_width_cap(), Error);
}
