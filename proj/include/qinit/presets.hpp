#pragma once

#include "qinit/core.hpp"

#include <cstdint>
#include <string>

namespace qinit {

// Equal superposition of all 2^n basis states.
TargetState uniform(int n);

// (|0...0> + sign |1...1>)/sqrt(2); sign is +1 or -1, n >= 2.
TargetState ghz(int n, int sign = +1);

// Grover-style search state on n >= 1 qubits with marked bitstring
// `marked` (length n) and mixing angle theta: amplitude sin(theta) on the
// marked state and cos(theta)/sqrt(N-1) on each of the other N-1 states.
// Exactly normalized for every theta.
struct GroverSpec {
  int n = 2;
  std::string marked;
  double theta = 0.0;
};
TargetState grover_state(const GroverSpec& spec);

// Closed-form marked-branch angle ratio at tree level k (1 <= k <= n):
// Omega_k = sqrt(((N - 2^k) cos^2 t + 2^k (N-1) sin^2 t) / (N cos^2 t)).
// The level-k rotation under the marked prefix is arctan(Omega_k) when the
// k-th marked bit is 1 and arctan(1/Omega_k) when it is 0.  Errors when
// cos(theta) = 0 (the ratio degenerates).
double grover_omega(int n, int k, double theta);

// Normalized state with 2^n independent standard complex Gaussian
// amplitudes drawn from mt19937_64(seed): per amplitude, real part first,
// then imaginary part.
TargetState random_state(int n, std::uint64_t seed);

// Same draw order, imaginary parts forced to zero (all-real states).
TargetState random_real_state(int n, std::uint64_t seed);

// Deterministic per-trial seed derived from a base seed (splitmix64 over
// the tuple).
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t n, std::uint64_t trial);

}  // namespace qinit
