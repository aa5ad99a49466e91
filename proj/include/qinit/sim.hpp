#pragma once

#include "qinit/core.hpp"

#include <optional>

namespace qinit {

// Width cap for dense operator construction.
inline constexpr int kOperatorMaxQubits = 10;
// Default width cap for statevector runs; QINIT_MAX_QUBITS overrides it.
inline constexpr int kRunMaxQubits = 24;

// Effective run cap: QINIT_MAX_QUBITS from the environment when set,
// kRunMaxQubits otherwise.
int run_width_cap();

struct SimState {
  int n = 0;
  Eigen::VectorXcd vector;
};

// |0...0> on n qubits.
SimState zero_state(int n);

// The computational basis state with the given index.
SimState basis_state(int n, std::uint64_t index);

// Applies one controlled gate in place: on every basis pair whose control
// bits match, the 2x2 gate matrix acts on the target amplitudes.
void apply_in_place(SimState& state, const ControlledGate& gate);

// Value-returning form of apply_in_place.
SimState apply(SimState state, const ControlledGate& gate);

// Runs the whole circuit, by default from |0...0>.  Consecutive gates whose
// combined support fits in three qubits and whose product is a phase
// permutation are executed as one fused pass; the result is the exact same
// operator product as gate-by-gate application.  Throws Error when the
// width exceeds run_width_cap().
SimState run(const Circuit& circuit, std::optional<SimState> initial = std::nullopt);

// Dense 2^n x 2^n operator of the circuit (column j = run on basis j).
// Throws Error when n exceeds kOperatorMaxQubits.
Eigen::MatrixXcd operator_of(const Circuit& circuit);

struct Deviation {
  double max_abs = 0.0;  // max componentwise |prepared - target|
  Complex overlap;       // <target|prepared>
};

// Componentwise comparison of a prepared state against a target.
Deviation deviation(const SimState& prepared, const TargetState& target);

// True when the two circuits' dense operators agree entrywise within tol.
bool operator_equivalent(const Circuit& a, const Circuit& b, double tol = kPrepTol);

}  // namespace qinit
