#include "qinit/sim.hpp"

#include "qinit/lower.hpp"

#include <array>
#include <cstdlib>
#include <cstring>
#include <string>
#include <unordered_map>
#include <vector>

namespace qinit {

namespace {

// Entries of a fused window product below this magnitude count as zero when
// testing for a phase permutation; any window that fails the test is simply
// executed gate by gate, so the cutoff never affects correctness.
constexpr double kPermCutoff = 1e-14;

std::uint64_t target_mask(const ControlledGate& g, int n) {
  return std::uint64_t{1} << (n - g.target);
}

void control_masks(const ControlledGate& g, int n, std::uint64_t& care, std::uint64_t& ones) {
  care = 0;
  ones = 0;
  for (const Control& c : g.controls) {
    const std::uint64_t bit = std::uint64_t{1} << (n - c.qubit);
    care |= bit;
    if (c.value) ones |= bit;
  }
}

bool is_exact_x(const Eigen::Matrix2cd& m) {
  return m(0, 0) == 0.0 && m(1, 1) == 0.0 && m(0, 1) == 1.0 && m(1, 0) == 1.0;
}

}  // namespace

int run_width_cap() {
  if (const char* env = std::getenv("QINIT_MAX_QUBITS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 30)
      throw Error("QINIT_MAX_QUBITS must be an integer in [1, 30]");
    return static_cast<int>(v);
  }
  return kRunMaxQubits;
}

SimState zero_state(int n) {
  if (n < 1 || n > 30) throw Error("state width must be in [1, 30]");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
  v[0] = 1.0;
  return SimState{n, std::move(v)};
}

SimState basis_state(int n, std::uint64_t index) {
  SimState s = zero_state(n);
  if (index >> n) throw Error("basis index does not fit in the state width");
  s.vector[0] = 0.0;
  s.vector[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

void apply_in_place(SimState& state, const ControlledGate& gate) {
  const int n = state.n;
  if (gate.target > n || (!gate.controls.empty() && gate.controls.back().qubit > n))
    throw Error("gate does not fit the state width");

  std::uint64_t care = 0, ones = 0;
  control_masks(gate, n, care, ones);
  const std::uint64_t tbit = target_mask(gate, n);
  const std::uint64_t fixed = care | tbit;
  const std::uint64_t pairs = std::uint64_t{1}
                              << (n - static_cast<int>(gate.controls.size()) - 1);

  const Eigen::Matrix2cd m = gate_matrix(gate.gate);
  Complex* a = state.vector.data();

  std::uint64_t i = ones;
  if (is_exact_x(m)) {
    for (std::uint64_t p = 0; p < pairs; ++p) {
      std::swap(a[i], a[i | tbit]);
      i = (((i | fixed) + 1) & ~fixed) | ones;
    }
    return;
  }
  const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  for (std::uint64_t p = 0; p < pairs; ++p) {
    const Complex x = a[i];
    const Complex y = a[i | tbit];
    a[i] = m00 * x + m01 * y;
    a[i | tbit] = m10 * x + m11 * y;
    i = (((i | fixed) + 1) & ~fixed) | ones;
  }
}

SimState apply(SimState state, const ControlledGate& gate) {
  apply_in_place(state, gate);
  return state;
}

namespace {

// A gate window whose product is a phase permutation, reduced to its
// non-identity moves in the window's local index space.  Cached by a
// structural key, since lowered circuits repeat a handful of window shapes
// across many qubit placements.
struct CachedWindow {
  bool fusable = false;
  int s = 0;  // support size, 1..3
  struct Move {
    int src = 0;
    int dst = 0;
    Complex phase{1.0, 0.0};
    bool unit_phase = true;
  };
  std::vector<Move> moves;
};

using LocalMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

// Support of gates[begin, begin+len), ascending; false when it needs more
// than three qubits.
bool window_support(const std::vector<ControlledGate>& gates, size_t begin, size_t len,
                    std::array<int, 3>& support, int& s) {
  s = 0;
  const auto add_qubit = [&](int q) {
    for (int j = 0; j < s; ++j)
      if (support[static_cast<size_t>(j)] == q) return true;
    if (s == 3) return false;
    support[static_cast<size_t>(s++)] = q;
    return true;
  };
  for (size_t k = begin; k < begin + len; ++k) {
    const ControlledGate& g = gates[k];
    if (!add_qubit(g.target)) return false;
    for (const Control& c : g.controls)
      if (!add_qubit(c.qubit)) return false;
  }
  std::sort(support.begin(), support.begin() + s);
  return true;
}

int local_pos(const std::array<int, 3>& qubits, int s, int q) {
  for (int j = 0; j < s; ++j)
    if (qubits[static_cast<size_t>(j)] == q) return s - 1 - j;
  throw Error("gate qubit missing from window support");
}

// Structural key: local wiring plus exact gate parameters.  Identical keys
// mean identical local operators, so cache hits are exact.
void build_key(const std::vector<ControlledGate>& gates, size_t begin, size_t len,
               const std::array<int, 3>& support, int s, std::string& key) {
  key.clear();
  key.push_back(static_cast<char>(s));
  const auto push_double = [&](double v) {
    char raw[sizeof(double)];
    std::memcpy(raw, &v, sizeof raw);
    key.append(raw, sizeof raw);
  };
  for (size_t k = begin; k < begin + len; ++k) {
    const ControlledGate& g = gates[k];
    key.push_back(static_cast<char>(local_pos(support, s, g.target)));
    key.push_back(static_cast<char>(g.controls.size()));
    for (const Control& c : g.controls)
      key.push_back(static_cast<char>(local_pos(support, s, c.qubit) | (c.value << 4)));
    if (const auto* rot = std::get_if<Rotation>(&g.gate)) {
      key.push_back('R');
      push_double(rot->theta);
    } else if (const auto* u2 = std::get_if<Unitary2>(&g.gate)) {
      key.push_back('U');
      push_double(u2->a0.real());
      push_double(u2->a0.imag());
      push_double(u2->a1.real());
      push_double(u2->a1.imag());
    } else if (const auto* named = std::get_if<Named>(&g.gate)) {
      key.push_back(static_cast<char>('N' + static_cast<int>(named->kind)));
    } else {
      const auto& m = std::get<Mat2>(g.gate).m;
      key.push_back('M');
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
          push_double(m(r, c).real());
          push_double(m(r, c).imag());
        }
    }
  }
}

// Embeds one controlled gate into the window's local space.  Local index bit
// order mirrors the global convention: support[0] is the most significant.
LocalMat local_operator(const ControlledGate& g, const std::array<int, 3>& qubits, int s) {
  int care = 0, ones = 0;
  for (const Control& c : g.controls) {
    care |= 1 << local_pos(qubits, s, c.qubit);
    if (c.value) ones |= 1 << local_pos(qubits, s, c.qubit);
  }
  const int tbit = 1 << local_pos(qubits, s, g.target);
  const Eigen::Matrix2cd m = gate_matrix(g.gate);

  const int dim = 1 << s;
  LocalMat op = LocalMat::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    if ((col & care) != ones) {
      op(col, col) = 1.0;
      continue;
    }
    const int b = (col & tbit) ? 1 : 0;
    op(col & ~tbit, col) = m(0, b);
    op(col | tbit, col) = m(1, b);
  }
  return op;
}

// Composes the window and extracts its phase-permutation form, if any.
CachedWindow compose_window(const std::vector<ControlledGate>& gates, size_t begin,
                            size_t len, const std::array<int, 3>& support, int s) {
  CachedWindow cw;
  cw.s = s;
  const int dim = 1 << s;
  LocalMat prod = LocalMat::Identity(dim, dim);
  for (size_t k = begin; k < begin + len; ++k)
    prod = (local_operator(gates[k], support, s) * prod).eval();

  std::array<bool, 8> row_used{};
  for (int col = 0; col < dim; ++col) {
    int row = -1;
    for (int r = 0; r < dim; ++r) {
      if (std::abs(prod(r, col)) <= kPermCutoff) continue;
      if (row >= 0) return cw;  // two nonzeros in one column
      row = r;
    }
    if (row < 0 || row_used[static_cast<size_t>(row)]) return cw;
    row_used[static_cast<size_t>(row)] = true;
    const Complex phase = prod(row, col);
    if (std::abs(std::abs(phase) - 1.0) > kPermCutoff) return cw;
    if (row == col && phase == Complex{1.0, 0.0}) continue;
    cw.moves.push_back({col, row, phase, phase == Complex{1.0, 0.0}});
  }
  cw.fusable = true;
  return cw;
}

void apply_fused(SimState& state, const CachedWindow& cw, const std::array<int, 3>& qubits) {
  const int n = state.n;
  std::uint64_t smask = 0;
  for (int j = 0; j < cw.s; ++j) smask |= std::uint64_t{1} << (n - qubits[static_cast<size_t>(j)]);

  // Global offset of each local index.
  std::array<std::uint64_t, 8> off{};
  const int dim = 1 << cw.s;
  for (int l = 0; l < dim; ++l) {
    std::uint64_t o = 0;
    for (int j = 0; j < cw.s; ++j)
      if ((l >> (cw.s - 1 - j)) & 1) o |= std::uint64_t{1} << (n - qubits[static_cast<size_t>(j)]);
    off[static_cast<size_t>(l)] = o;
  }

  Complex* a = state.vector.data();
  const std::uint64_t blocks = std::uint64_t{1} << (n - cw.s);
  std::array<Complex, 8> tmp;
  std::uint64_t base = 0;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    for (const auto& mv : cw.moves)
      tmp[static_cast<size_t>(mv.src)] = a[base + off[static_cast<size_t>(mv.src)]];
    for (const auto& mv : cw.moves) {
      const Complex v = tmp[static_cast<size_t>(mv.src)];
      a[base + off[static_cast<size_t>(mv.dst)]] = mv.unit_phase ? v : mv.phase * v;
    }
    base = ((base | smask) + 1) & ~smask;
  }
}

// The controlled-gate lowering expands each Toffoli-like step into exactly
// five gates, so fused windows of that length dominate lowered circuits.
constexpr size_t kFuseWindow = 5;

bool mat_eq(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  return a(0, 0) == b(0, 0) && a(0, 1) == b(0, 1) && a(1, 0) == b(1, 0) && a(1, 1) == b(1, 1);
}

const Eigen::Matrix2cd& sqrt_x() {
  static const Eigen::Matrix2cd v = [] {
    Eigen::Matrix2cd x;
    x << 0, 1, 1, 0;
    return unitary_sqrt(x);
  }();
  return v;
}

const Eigen::Matrix2cd& sqrt_x_dag() {
  static const Eigen::Matrix2cd v = sqrt_x().adjoint();
  return v;
}

// Recognizes the exact five-gate Toffoli expansion the lowering emits:
// C(b)V(t), CX(a,b), C(b)V+(t), CX(a,b), C(a)V(t) with V = sqrt(X).  The
// product is the Toffoli C(a,b)X(t), a pure amplitude swap.
bool match_toffoli(const std::vector<ControlledGate>& gates, size_t i, int& a, int& b,
                   int& t) {
  for (size_t k = 0; k < 5; ++k) {
    const ControlledGate& g = gates[i + k];
    if (g.controls.size() != 1 || g.controls[0].value != 1) return false;
  }
  const ControlledGate& g0 = gates[i];
  const ControlledGate& g1 = gates[i + 1];
  const ControlledGate& g2 = gates[i + 2];
  const ControlledGate& g3 = gates[i + 3];
  const ControlledGate& g4 = gates[i + 4];
  b = g0.controls[0].qubit;
  t = g0.target;
  a = g1.controls[0].qubit;
  if (g1.target != b || g3.target != b || g3.controls[0].qubit != a) return false;
  if (g2.target != t || g2.controls[0].qubit != b) return false;
  if (g4.target != t || g4.controls[0].qubit != a) return false;
  if (a == b || a == t || b == t) return false;

  const auto* x1 = std::get_if<Named>(&g1.gate);
  const auto* x3 = std::get_if<Named>(&g3.gate);
  if (!x1 || x1->kind != NamedKind::X || !x3 || x3->kind != NamedKind::X) return false;
  const auto* m0 = std::get_if<Mat2>(&g0.gate);
  const auto* m2 = std::get_if<Mat2>(&g2.gate);
  const auto* m4 = std::get_if<Mat2>(&g4.gate);
  return m0 && m2 && m4 && mat_eq(m0->m, sqrt_x()) && mat_eq(m2->m, sqrt_x_dag()) &&
         mat_eq(m4->m, sqrt_x());
}

void apply_toffoli(SimState& state, int a, int b, int t) {
  const int n = state.n;
  const std::uint64_t tt = std::uint64_t{1} << (n - t);
  const std::uint64_t ones =
      (std::uint64_t{1} << (n - a)) | (std::uint64_t{1} << (n - b));
  const std::uint64_t fixed = ones | tt;
  const std::uint64_t pairs = std::uint64_t{1} << (n - 3);
  Complex* v = state.vector.data();
  std::uint64_t i = ones;
  for (std::uint64_t p = 0; p < pairs; ++p) {
    std::swap(v[i], v[i | tt]);
    i = (((i | fixed) + 1) & ~fixed) | ones;
  }
}

}  // namespace

SimState run(const Circuit& circuit, std::optional<SimState> initial) {
  const int cap = run_width_cap();
  if (circuit.n > cap)
    throw Error("circuit width " + std::to_string(circuit.n) + " exceeds the run cap " +
                std::to_string(cap));
  SimState state;
  if (initial.has_value()) {
    state = std::move(*initial);
    if (state.n != circuit.n) throw Error("initial state width does not match the circuit");
  } else {
    state = zero_state(circuit.n);
  }

  const auto& gates = circuit.gates;
  std::unordered_map<std::string, CachedWindow> cache;
  std::string key;
  std::array<int, 3> support{};
  int s = 0;
  size_t i = 0;
  int ta = 0, tb = 0, tt = 0;
  while (i < gates.size()) {
    if (i + kFuseWindow <= gates.size() && match_toffoli(gates, i, ta, tb, tt)) {
      apply_toffoli(state, ta, tb, tt);
      i += kFuseWindow;
      continue;
    }
    if (i + kFuseWindow <= gates.size() && window_support(gates, i, kFuseWindow, support, s)) {
      build_key(gates, i, kFuseWindow, support, s, key);
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, compose_window(gates, i, kFuseWindow, support, s)).first;
      if (it->second.fusable) {
        apply_fused(state, it->second, support);
        i += kFuseWindow;
        continue;
      }
    }
    apply_in_place(state, gates[i]);
    ++i;
  }
  return state;
}

Eigen::MatrixXcd operator_of(const Circuit& circuit) {
  if (circuit.n > kOperatorMaxQubits)
    throw Error("operator construction is capped at " + std::to_string(kOperatorMaxQubits) +
                " qubits");
  const Eigen::Index dim = Eigen::Index{1} << circuit.n;
  Eigen::MatrixXcd op(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    SimState s = run(circuit, basis_state(circuit.n, static_cast<std::uint64_t>(col)));
    op.col(col) = s.vector;
  }
  return op;
}

Deviation deviation(const SimState& prepared, const TargetState& target) {
  if (prepared.n != target.n || prepared.vector.size() != target.amplitudes.size())
    throw Error("state widths differ");
  Deviation d;
  d.max_abs = (prepared.vector - target.amplitudes).cwiseAbs().maxCoeff();
  d.overlap = target.amplitudes.adjoint() * prepared.vector;
  return d;
}

bool operator_equivalent(const Circuit& a, const Circuit& b, double tol) {
  if (a.n != b.n) return false;
  return (operator_of(a) - operator_of(b)).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace qinit
