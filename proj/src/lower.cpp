#include "qinit/lower.hpp"

#include <cmath>

namespace qinit {

namespace {

const Eigen::Matrix2cd& x_matrix() {
  static const Eigen::Matrix2cd x = [] {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
  }();
  return x;
}

bool exactly_x(const Eigen::Matrix2cd& m) {
  return m(0, 0) == 0.0 && m(1, 1) == 0.0 && m(0, 1) == 1.0 && m(1, 0) == 1.0;
}

bool exactly_identity(const Eigen::Matrix2cd& m) {
  return m(0, 0) == 1.0 && m(1, 1) == 1.0 && m(0, 1) == 0.0 && m(1, 0) == 0.0;
}

// Clears a negative-zero imaginary part so the principal square root below
// never lands on the arg = -pi branch cut.
Complex canonical(Complex z) {
  if (z.imag() == 0.0) return Complex{z.real(), 0.0};
  return z;
}

// Hot path: every emitted gate is valid by construction (distinct wires,
// unitary matrix), so this skips make_gate's revalidation.
void emit(std::vector<ControlledGate>& out, int control, int target,
          const Eigen::Matrix2cd& m) {
  Gate g = exactly_x(m) ? Gate{Named{NamedKind::X}} : Gate{Mat2{m}};
  ControlList controls;
  if (control != 0) controls.push_back({control, 1});
  out.push_back(ControlledGate{std::move(controls), target, std::move(g)});
}

std::vector<int> free_wires(const std::vector<int>& controls, int target, int n) {
  std::vector<char> used(static_cast<size_t>(n) + 1, 0);
  used[static_cast<size_t>(target)] = 1;
  for (int c : controls) used[static_cast<size_t>(c)] = 1;
  std::vector<int> free;
  for (int q = 1; q <= n; ++q)
    if (!used[static_cast<size_t>(q)]) free.push_back(q);
  return free;
}

void lower_cu(std::vector<ControlledGate>& out, const std::vector<int>& controls,
              int target, const Eigen::Matrix2cd& u, int n);

// Toffoli ladder over m-2 borrowed wires (Barenco et al., Lemma 7.2): each
// borrowed wire is returned to its input state, so arbitrary data may sit
// on it.  Control order carries the ladder roles; callers pass a
// deterministic order.
void mcx_ladder(std::vector<ControlledGate>& out, const std::vector<int>& c, int target,
                const std::vector<int>& w, int n) {
  const int m = static_cast<int>(c.size());
  const auto toffoli = [&](int a, int b, int t) {
    lower_cu(out, {std::min(a, b), std::max(a, b)}, t, Eigen::Matrix2cd{x_matrix()}, n);
  };
  const auto emit_step = [&](int i) {
    if (i == m - 2) {
      toffoli(c[0], c[1], w[0]);
    } else if (i == 0) {
      toffoli(c[static_cast<size_t>(m) - 1], w[static_cast<size_t>(m) - 3], target);
    } else {
      toffoli(c[static_cast<size_t>(m - 1 - i)], w[static_cast<size_t>(m - 3 - i)],
              w[static_cast<size_t>(m - 2 - i)]);
    }
  };
  for (int round = 0; round < 2; ++round) {
    for (int i = 0; i <= m - 2; ++i) emit_step(i);
    for (int i = m - 3; i >= 1; --i) emit_step(i);
  }
}

// Multi-controlled X with at least one idle wire available.  Uses a ladder
// outright when m-2 borrowed wires exist; otherwise splits around one idle
// wire b (Barenco et al., Lemma 7.3): with A = product of the first half
// and B of the second, the sequence b^=A, t^=B.b, b^=A, t^=B.b flips t by
// A.B and restores b.  Both halves see the other half's wires as borrowable.
void lower_mcx(std::vector<ControlledGate>& out, const std::vector<int>& controls,
               int target, int n) {
  const int m = static_cast<int>(controls.size());
  if (m == 0) {
    emit(out, 0, target, x_matrix());
    return;
  }
  if (m == 1) {
    emit(out, controls[0], target, x_matrix());
    return;
  }
  if (m == 2) {
    lower_cu(out, controls, target, Eigen::Matrix2cd{x_matrix()}, n);
    return;
  }
  const std::vector<int> free = free_wires(controls, target, n);
  if (static_cast<int>(free.size()) >= m - 2) {
    mcx_ladder(out, controls, target,
               std::vector<int>(free.begin(), free.begin() + (m - 2)), n);
    return;
  }
  if (free.empty()) throw Error("multi-controlled X needs at least one idle wire");
  const int b = free[0];
  const size_t m1 = (static_cast<size_t>(m) + 1) / 2;
  const std::vector<int> first(controls.begin(), controls.begin() + static_cast<std::ptrdiff_t>(m1));
  std::vector<int> second(controls.begin() + static_cast<std::ptrdiff_t>(m1), controls.end());
  second.push_back(b);
  for (int round = 0; round < 2; ++round) {
    lower_mcx(out, first, b, n);
    lower_mcx(out, second, target, n);
  }
}

void lower_cu(std::vector<ControlledGate>& out, const std::vector<int>& controls,
              int target, const Eigen::Matrix2cd& u, int n) {
  const int k = static_cast<int>(controls.size());
  if (k == 0) {
    emit(out, 0, target, u);
    return;
  }
  if (k == 1) {
    emit(out, controls[0], target, u);
    return;
  }
  if (exactly_identity(u)) return;
  if (exactly_x(u) && k >= 3 && !free_wires(controls, target, n).empty()) {
    lower_mcx(out, controls, target, n);
    return;
  }
  // Barenco et al., Lemma 7.5: peel the last control with V = sqrt(U).
  const Eigen::Matrix2cd v = unitary_sqrt(u);
  const int last = controls.back();
  const std::vector<int> rest(controls.begin(), controls.end() - 1);
  emit(out, last, target, v);
  lower_mcx(out, rest, last, n);  // the target is always idle here
  emit(out, last, target, v.adjoint());
  lower_mcx(out, rest, last, n);
  lower_cu(out, rest, target, v, n);
}

}  // namespace

Eigen::Matrix2cd unitary_sqrt(const Eigen::Matrix2cd& u) {
  // Eigenvalues via the entry-level discriminant (a-d)^2 + 4bc, which stays
  // accurate when the two eigenvalues nearly coincide (tr^2 - 4 det cancels
  // catastrophically there).
  const Complex a = u(0, 0), b = u(0, 1), c = u(1, 0), d = u(1, 1);
  const Complex tr = a + d;
  const Complex disc = std::sqrt(canonical((a - d) * (a - d) + 4.0 * b * c));
  const Complex s1 = std::sqrt(canonical((tr + disc) / 2.0));
  const Complex s2 = std::sqrt(canonical((tr - disc) / 2.0));
  // Cayley-Hamilton: (U + s1 s2 I) / (s1 + s2) has eigenvalues s1 and s2.
  // The principal roots keep both halved phases in (-pi/2, pi/2], so the
  // denominator cannot vanish.
  return (u + s1 * s2 * Eigen::Matrix2cd::Identity()) / (s1 + s2);
}

std::vector<ControlledGate> lower_controlled(const ControlledGate& gate, int n) {
  if (gate.target > n || (!gate.controls.empty() && gate.controls.back().qubit > n))
    throw Error("gate does not fit the requested width");
  if (gate.controls.size() <= 1) return {gate};

  std::vector<ControlledGate> out;
  const Eigen::Matrix2cd u = gate_matrix(gate.gate);
  if (exactly_identity(u)) return out;

  std::vector<int> negated;
  std::vector<int> positives;
  positives.reserve(gate.controls.size());
  for (const Control& c : gate.controls) {
    if (c.value == 0) negated.push_back(c.qubit);
    positives.push_back(c.qubit);
  }
  for (int q : negated) emit(out, 0, q, x_matrix());
  lower_cu(out, positives, gate.target, u, n);
  for (auto it = negated.rbegin(); it != negated.rend(); ++it)
    emit(out, 0, *it, x_matrix());
  return out;
}

Circuit lower_circuit(const Circuit& circuit) {
  Circuit out{circuit.n, {}};
  for (const ControlledGate& g : circuit.gates) {
    for (ControlledGate& low : lower_controlled(g, circuit.n)) out.gates.push_back(std::move(low));
  }
  return out;
}

long lowered_count_bound(int k) {
  if (k < 0) throw Error("control count must be nonnegative");
  return 40L * k * k + 1;
}

}  // namespace qinit
