#pragma once

#include "qinit/core.hpp"

#include <vector>

namespace qinit {

// Principal square root of a 2x2 unitary: both eigenphases are halved into
// (-pi/2, pi/2], so sqrt(U)^2 reproduces U exactly (no global phase slip).
Eigen::Matrix2cd unitary_sqrt(const Eigen::Matrix2cd& u);

// Rewrites one k-controlled gate as a sequence of gates with at most one
// control each, ancilla-free, exact including global phase, following the
// Barenco et al. recursion
//   C^k(U) = C(V on last ctrl -> t) . C^{k-1}(X) . C(V+) . C^{k-1}(X) . C^{k-1}(V)
// with V = sqrt(U).  Multi-controlled X stages are built from Toffoli
// ladders over borrowed (state-restored) circuit qubits when enough idle
// wires exist, and otherwise split in half around one idle wire until the
// halves admit ladders; at full width (k = n-1) the sqrt recursion itself
// frees wires.  Gates with k <= 1 pass through unchanged.  `n` is the
// circuit width the gate lives in.
std::vector<ControlledGate> lower_controlled(const ControlledGate& gate, int n);

// Applies lower_controlled to every gate, in order.
Circuit lower_circuit(const Circuit& circuit);

// Documented upper bound on the number of gates lower_controlled emits for
// k controls at any width: Q(k) = 40k^2 + 1.  The worst case is full width
// (no idle wires); measured counts stay under half of this on k <= 12.
long lowered_count_bound(int k);

}  // namespace qinit
