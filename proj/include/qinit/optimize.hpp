#pragma once

#include "qinit/core.hpp"

#include <string>
#include <vector>

namespace qinit {

// What a rewrite pass promises to preserve: the full operator, or only the
// prepared state when the circuit is applied to |0...0>.
enum class EquivalenceLevel { kOperator, kPreparation };

struct PassReport {
  std::string pass;
  EquivalenceLevel preserves = EquivalenceLevel::kOperator;
  long gates_before = 0;
  long gates_after = 0;
  long rewrites = 0;
};

struct OptimizeResult {
  Circuit circuit;
  std::vector<PassReport> report;  // one entry per pass that changed something
};

// Repeatedly merges sibling pairs: two gates on the same target whose
// parameters agree within kUnitaryTol and whose control sets are identical
// except for one qubit appearing with both polarities.  That control drops
// out.  A pair may merge across intervening gates on the same target when
// every gate in between is control-disjoint from the right sibling (some
// control qubit fixed to opposite values), which makes them commute.  When
// several pairs qualify, the one whose differing control has the highest
// qubit index merges first; ties fall to the earliest positions.  Runs to
// a fixed point.  Preserves the full operator.
Circuit merge_siblings(const Circuit& circuit);

// Relabels Rotation gates whose angle is within kUnitaryTol of pi/4 or
// pi/2 as named H or X gates.  Preserves the full operator.
Circuit recognize_names(const Circuit& circuit);

// merge_siblings followed by recognize_names, with a report of the passes
// that fired.  An already-minimal circuit comes back unchanged with an
// empty report.
OptimizeResult optimize(const Circuit& circuit);

}  // namespace qinit
