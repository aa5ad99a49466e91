#pragma once

#include "qinit/core.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace qinit {

// Final-layer entry: the raw amplitude pair under a length n-1 prefix.
// The emitted gate sends |0> to (a0|0> + a1|1>) normalized.
struct FinalEntry {
  Complex a0;
  Complex a1;
};

// One rotation angle per binary prefix, layer by layer, plus the final layer
// of amplitude pairs.  A slot is nullopt exactly when its subtree weight is
// zero (the branch is unreachable, so no gate can ever fire there).
struct AngleTree {
  int n = 0;
  // rotations[j-1][p]: layer j in [1, n-1], prefix p of length j-1.
  std::vector<std::vector<std::optional<double>>> rotations;
  // last[p]: prefix p of length n-1.
  std::vector<std::optional<FinalEntry>> last;

  // Populated slots (rotations plus final entries).
  long entry_count() const;
  // Gates synthesize() will emit: populated slots whose gate acts
  // nontrivially on the branch it is reached through.
  long gate_count() const;
  // Free parameters of the emitted gates: 1 per rotation, 1 per real
  // final pair, 3 per complex final pair.
  long parameter_count() const;
};

// Total probability weight of the branch selected by the given bit prefix
// (empty prefix = whole state, weight 1).  Summed pairwise up the binary
// tree so that every caller sees bit-identical weights.
double subtree_weight(const TargetState& state, std::string_view prefix);

// Rotation angle for layer `layer` under `prefix` (length layer-1):
// atan2(sqrt(w(prefix 1)), sqrt(w(prefix 0))), in [0, pi/2].  nullopt when
// the prefix subtree weight is zero.
std::optional<double> rotation_angle(const TargetState& state, int layer,
                                     std::string_view prefix);

// Final-layer amplitude pair under `prefix` (length n-1); nullopt when the
// pair carries zero weight.
std::optional<FinalEntry> final_entry(const TargetState& state, std::string_view prefix);

AngleTree build_angle_tree(const TargetState& state);

// True when the entry's gate is the identity on the reachable branch
// (a1 = 0 with a0 real positive), i.e. synthesis may omit it.
bool final_entry_trivial(const FinalEntry& e);

// The gate for a nontrivial final entry: a Rotation for a real pair,
// otherwise a Unitary2 on the raw pair.
Gate final_gate(const FinalEntry& e);

// Emits the prefix-controlled gate sequence that prepares the state from
// |0...0>: layers 1..n-1 in prefix order, then the final layer.  Rotations
// with angle exactly zero and trivial final entries are omitted; both act
// as the identity on the branch they would fire in.
Circuit synthesize(const AngleTree& tree);
Circuit synthesize(const TargetState& state);

}  // namespace qinit
