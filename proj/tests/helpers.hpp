#pragma once

// Shared test utilities.  The operator builders here are deliberately
// independent of the library's simulator: they construct dense matrices
// straight from the gate definition and bit arithmetic, so simulator and
// lowering results can be checked against a second implementation.

#include "qinit/core.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace qtest {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline qinit::Complex random_complex(std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(gen);
  const double im = normal(gen);
  return {re, im};
}

// Haar-style random 2x2 unitary: two Gaussian columns, Gram-Schmidt.
inline Eigen::Matrix2cd random_unitary2(std::mt19937_64& gen) {
  while (true) {
    Eigen::Vector2cd c0{random_complex(gen), random_complex(gen)};
    Eigen::Vector2cd c1{random_complex(gen), random_complex(gen)};
    if (c0.norm() < 1e-3) continue;
    c0.normalize();
    c1 -= c0.dot(c1) * c0;
    if (c1.norm() < 1e-3) continue;
    c1.normalize();
    Eigen::Matrix2cd u;
    u.col(0) = c0;
    u.col(1) = c1;
    return u;
  }
}

// Dense operator of one controlled gate, built column by column from the
// control/target bit definitions alone.
inline Eigen::MatrixXcd brute_operator(int n, const qinit::ControlledGate& g) {
  const std::uint64_t dim = std::uint64_t{1} << n;
  const Eigen::Matrix2cd u = qinit::gate_matrix(g.gate);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  const std::uint64_t tbit = std::uint64_t{1} << (n - g.target);
  for (std::uint64_t j = 0; j < dim; ++j) {
    bool fires = true;
    for (const qinit::Control& c : g.controls)
      if (qinit::bit_of(j, c.qubit, n) != c.value) fires = false;
    if (!fires) {
      m(j, j) = 1.0;
      continue;
    }
    const int t = (j & tbit) ? 1 : 0;
    m(j & ~tbit, j) += u(0, t);
    m(j | tbit, j) += u(1, t);
  }
  return m;
}

// Product of the per-gate brute operators, applied in circuit order.
inline Eigen::MatrixXcd brute_circuit_operator(const qinit::Circuit& c) {
  const std::uint64_t dim = std::uint64_t{1} << c.n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
  for (const qinit::ControlledGate& g : c.gates) m = brute_operator(c.n, g) * m;
  return m;
}

// Gate-by-gate matrix-vector fold; the dumbest possible circuit runner.
inline Eigen::VectorXcd naive_run(const qinit::Circuit& c, Eigen::VectorXcd v) {
  for (const qinit::ControlledGate& g : c.gates) v = brute_operator(c.n, g) * v;
  return v;
}

inline Eigen::VectorXcd zero_vector(int n) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(std::int64_t{1} << n);
  v(0) = 1.0;
  return v;
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Random gate over all four gate kinds with `k` distinct controls.
inline qinit::ControlledGate random_gate(std::mt19937_64& gen, int n, int max_controls) {
  std::uniform_int_distribution<int> pick_qubit(1, n);
  std::uniform_int_distribution<int> pick_kind(0, 3);
  std::uniform_int_distribution<int> pick_bit(0, 1);
  std::uniform_real_distribution<double> pick_angle(-3.2, 6.3);

  const int target = pick_qubit(gen);
  std::vector<int> others;
  for (int q = 1; q <= n; ++q)
    if (q != target) others.push_back(q);
  std::shuffle(others.begin(), others.end(), gen);
  const int limit = std::min<int>(max_controls, static_cast<int>(others.size()));
  std::uniform_int_distribution<int> pick_count(0, limit);
  const int k = pick_count(gen);
  qinit::ControlList controls;
  for (int i = 0; i < k; ++i) controls.push_back({others[i], pick_bit(gen)});

  qinit::Gate gate;
  switch (pick_kind(gen)) {
    case 0:
      gate = qinit::Rotation{pick_angle(gen)};
      break;
    case 1: {
      qinit::Complex a0 = random_complex(gen), a1 = random_complex(gen);
      while (std::abs(a0) + std::abs(a1) < 1e-3) {
        a0 = random_complex(gen);
        a1 = random_complex(gen);
      }
      gate = qinit::Unitary2{a0, a1};
      break;
    }
    case 2: {
      const qinit::NamedKind kinds[] = {qinit::NamedKind::I, qinit::NamedKind::H,
                                        qinit::NamedKind::X};
      gate = qinit::Named{kinds[pick_bit(gen) + pick_bit(gen)]};
      break;
    }
    default:
      gate = qinit::Mat2{random_unitary2(gen)};
      break;
  }
  return qinit::make_gate(std::move(controls), target, std::move(gate));
}

inline qinit::Circuit random_circuit(std::mt19937_64& gen, int n, int gates,
                                     int max_controls) {
  qinit::Circuit c;
  c.n = n;
  for (int i = 0; i < gates; ++i) c.append(random_gate(gen, n, max_controls));
  return c;
}

// Exact (bitwise parameter) structural equality.
inline bool gates_equal(const qinit::ControlledGate& a, const qinit::ControlledGate& b) {
  if (a.target != b.target || a.controls != b.controls) return false;
  if (a.gate.index() != b.gate.index()) return false;
  return std::visit(
      [&](const auto& ga) {
        using T = std::decay_t<decltype(ga)>;
        return ga == std::get<T>(b.gate);
      },
      a.gate);
}

inline bool circuits_equal(const qinit::Circuit& a, const qinit::Circuit& b) {
  if (a.n != b.n || a.gates.size() != b.gates.size()) return false;
  for (size_t i = 0; i < a.gates.size(); ++i)
    if (!gates_equal(a.gates[i], b.gates[i])) return false;
  return true;
}

}  // namespace qtest
