#include "qinit/core.hpp"

#include <algorithm>
#include <cmath>

namespace qinit {

namespace {

bool is_unitary(const Eigen::Matrix2cd& m, double tol) {
  return (m.adjoint() * m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

Eigen::Matrix2cd gate_matrix(const Gate& g) {
  Eigen::Matrix2cd m;
  if (const auto* r = std::get_if<Rotation>(&g)) {
    if (!std::isfinite(r->theta)) throw Error("rotation angle must be finite");
    const double c = std::cos(r->theta), s = std::sin(r->theta);
    m << c, s, s, -c;
    return m;
  }
  if (const auto* u = std::get_if<Unitary2>(&g)) {
    const double r2 = std::norm(u->a0) + std::norm(u->a1);
    if (r2 == 0.0) throw Error("degenerate Unitary2 gate: a0 = a1 = 0");
    const double r = std::sqrt(r2);
    m << u->a0 / r, std::conj(u->a1) / r, u->a1 / r, -std::conj(u->a0) / r;
    return m;
  }
  if (const auto* named = std::get_if<Named>(&g)) {
    switch (named->kind) {
      case NamedKind::I:
        return Eigen::Matrix2cd::Identity();
      case NamedKind::H: {
        const double h = 1.0 / std::sqrt(2.0);
        m << h, h, h, -h;
        return m;
      }
      case NamedKind::X:
        m << 0, 1, 1, 0;
        return m;
    }
    throw Error("unknown named gate");
  }
  const auto& w = std::get<Mat2>(g);
  if (!is_unitary(w.m, kUnitaryTol)) throw Error("Mat2 gate is not unitary");
  return w.m;
}

bool gate_close(const Gate& a, const Gate& b, double tol) {
  return (gate_matrix(a) - gate_matrix(b)).cwiseAbs().maxCoeff() <= tol;
}

bool operator==(const Rotation& a, const Rotation& b) { return a.theta == b.theta; }
bool operator==(const Unitary2& a, const Unitary2& b) { return a.a0 == b.a0 && a.a1 == b.a1; }
bool operator==(const Named& a, const Named& b) { return a.kind == b.kind; }
bool operator==(const Mat2& a, const Mat2& b) { return a.m == b.m; }

ControlledGate make_gate(ControlList controls, int target, Gate gate) {
  if (target < 1) throw Error("gate target must be a positive qubit index");
  std::sort(controls.begin(), controls.end(),
            [](const Control& a, const Control& b) { return a.qubit < b.qubit; });
  for (size_t i = 0; i < controls.size(); ++i) {
    const Control& c = controls[i];
    if (c.qubit < 1) throw Error("control qubit must be a positive index");
    if (c.value != 0 && c.value != 1) throw Error("control value must be 0 or 1");
    if (c.qubit == target) throw Error("control qubit coincides with the target");
    if (i > 0 && controls[i - 1].qubit == c.qubit) throw Error("duplicate control qubit");
  }
  gate_matrix(gate);  // reject invalid parameters up front
  return ControlledGate{std::move(controls), target, std::move(gate)};
}

void Circuit::append(ControlledGate g) {
  if (g.target > n) throw Error("gate target exceeds circuit width");
  if (!g.controls.empty() && g.controls.back().qubit > n)
    throw Error("control qubit exceeds circuit width");
  gates.push_back(std::move(g));
}

namespace {

TargetState make_state(Eigen::VectorXcd amps, bool rescale) {
  const Eigen::Index size = amps.size();
  if (size < 2 || (size & (size - 1)) != 0)
    throw Error("amplitude count must be a power of two, at least 2");
  int n = 0;
  while ((Eigen::Index{1} << n) < size) ++n;
  const double norm = amps.norm();
  if (rescale) {
    if (norm == 0.0) throw Error("cannot rescale the zero vector");
    amps /= norm;
  } else if (std::abs(norm - 1.0) > kNormTol) {
    throw Error("state is not normalized (norm " + std::to_string(norm) + ")");
  }
  return TargetState{n, std::move(amps)};
}

}  // namespace

TargetState validate_state(const Eigen::VectorXcd& raw, bool rescale) {
  return make_state(raw, rescale);
}

TargetState validate_state(const std::vector<Complex>& raw, bool rescale) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(raw.size()));
  for (size_t i = 0; i < raw.size(); ++i) v[static_cast<Eigen::Index>(i)] = raw[i];
  return make_state(std::move(v), rescale);
}

std::uint64_t basis_index(std::string_view bits) {
  if (bits.empty() || bits.size() > 63) throw Error("bitstring length must be in [1, 63]");
  std::uint64_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw Error("bitstring may contain only 0 and 1");
    v = (v << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

std::string bitstring(std::uint64_t value, int n) {
  if (n < 1 || n > 63) throw Error("bitstring width must be in [1, 63]");
  if (n < 63 && (value >> n) != 0) throw Error("value does not fit in the requested width");
  std::string s(static_cast<size_t>(n), '0');
  for (int j = 0; j < n; ++j)
    if ((value >> (n - 1 - j)) & 1u) s[static_cast<size_t>(j)] = '1';
  return s;
}

}  // namespace qinit
