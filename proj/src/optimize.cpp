#include "qinit/optimize.hpp"

#include <cmath>
#include <optional>

namespace qinit {

namespace {

// The single qubit at which two sorted control lists differ by polarity
// alone, if the lists are otherwise identical.
std::optional<int> sibling_difference(const ControlList& a, const ControlList& b) {
  if (a.size() != b.size()) return std::nullopt;
  int diff = -1;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].qubit != b[i].qubit) return std::nullopt;
    if (a[i].value != b[i].value) {
      if (diff >= 0) return std::nullopt;
      diff = a[i].qubit;
    }
  }
  if (diff < 0) return std::nullopt;
  return diff;
}

// True when the two gates can never fire on the same basis state: some
// shared control qubit is pinned to opposite values.  Such same-target
// gates commute exactly.
bool control_disjoint(const ControlledGate& x, const ControlledGate& y) {
  size_t i = 0, j = 0;
  while (i < x.controls.size() && j < y.controls.size()) {
    if (x.controls[i].qubit < y.controls[j].qubit) {
      ++i;
    } else if (x.controls[i].qubit > y.controls[j].qubit) {
      ++j;
    } else {
      if (x.controls[i].value != y.controls[j].value) return true;
      ++i;
      ++j;
    }
  }
  return false;
}

// Merges one run [begin, end) of same-target gates to a local fixed point;
// returns the number of merges.  Candidate order: highest differing control
// qubit first, then earliest pair positions.
long merge_run(std::vector<ControlledGate>& gates, size_t begin, size_t& end) {
  long merges = 0;
  for (;;) {
    int best_q = -1;
    size_t bi = 0, bj = 0;
    for (size_t i = begin; i < end; ++i) {
      for (size_t j = i + 1; j < end; ++j) {
        const auto dq = sibling_difference(gates[i].controls, gates[j].controls);
        if (!dq || *dq <= best_q) continue;
        if (!gate_close(gates[i].gate, gates[j].gate, kUnitaryTol)) continue;
        bool movable = true;
        for (size_t k = i + 1; k < j && movable; ++k)
          movable = control_disjoint(gates[k], gates[j]);
        if (!movable) continue;
        best_q = *dq;
        bi = i;
        bj = j;
      }
    }
    if (best_q < 0) return merges;
    ControlList kept;
    kept.reserve(gates[bi].controls.size() - 1);
    for (const Control& c : gates[bi].controls)
      if (c.qubit != best_q) kept.push_back(c);
    gates[bi] = make_gate(std::move(kept), gates[bi].target, gates[bi].gate);
    gates.erase(gates.begin() + static_cast<std::ptrdiff_t>(bj));
    --end;
    ++merges;
  }
}

long merge_all(std::vector<ControlledGate>& gates) {
  long merges = 0;
  size_t begin = 0;
  while (begin < gates.size()) {
    size_t end = begin + 1;
    while (end < gates.size() && gates[end].target == gates[begin].target) ++end;
    merges += merge_run(gates, begin, end);
    begin = end;
  }
  return merges;
}

long recognize_all(std::vector<ControlledGate>& gates) {
  long rewrites = 0;
  for (ControlledGate& g : gates) {
    const auto* rot = std::get_if<Rotation>(&g.gate);
    if (!rot) continue;
    if (std::abs(rot->theta - M_PI / 4.0) <= kUnitaryTol) {
      g.gate = Named{NamedKind::H};
      ++rewrites;
    } else if (std::abs(rot->theta - M_PI / 2.0) <= kUnitaryTol) {
      g.gate = Named{NamedKind::X};
      ++rewrites;
    }
  }
  return rewrites;
}

}  // namespace

Circuit merge_siblings(const Circuit& circuit) {
  Circuit out = circuit;
  merge_all(out.gates);
  return out;
}

Circuit recognize_names(const Circuit& circuit) {
  Circuit out = circuit;
  recognize_all(out.gates);
  return out;
}

OptimizeResult optimize(const Circuit& circuit) {
  OptimizeResult result{circuit, {}};
  const long before_merge = static_cast<long>(result.circuit.gates.size());
  const long merges = merge_all(result.circuit.gates);
  if (merges > 0)
    result.report.push_back({"merge-siblings", EquivalenceLevel::kOperator, before_merge,
                             static_cast<long>(result.circuit.gates.size()), merges});
  const long before_names = static_cast<long>(result.circuit.gates.size());
  const long renames = recognize_all(result.circuit.gates);
  if (renames > 0)
    result.report.push_back({"recognize-names", EquivalenceLevel::kOperator, before_names,
                             before_names, renames});
  return result;
}

}  // namespace qinit
