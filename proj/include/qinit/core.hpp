#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qinit {

using Complex = std::complex<double>;

// Input states must be unit vectors within this tolerance.
inline constexpr double kNormTol = 1e-10;
// Gate matrices must be unitary within this tolerance; it is also the cutoff
// for treating two gate parameter sets as equal.
inline constexpr double kUnitaryTol = 1e-12;
// Default bound on the max componentwise deviation accepted when checking a
// prepared state against its target.
inline constexpr double kPrepTol = 1e-9;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

// Real reflection [[cos t, sin t], [sin t, -cos t]].  theta = 0 is the
// phase flip diag(1,-1), pi/4 is the Hadamard, pi/2 is NOT.
struct Rotation {
  double theta = 0.0;
};

// Final-layer gate determined by a nonzero amplitude pair: the first column
// is (a0, a1)/r and the second (conj(a1), -conj(a0))/r with r = |(a0,a1)|.
struct Unitary2 {
  Complex a0;
  Complex a1;
};

enum class NamedKind { I, H, X };

struct Named {
  NamedKind kind = NamedKind::I;
};

// General 2x2 unitary.  Synthesis never produces this; the controlled-gate
// lowering does, because square roots of reflection-type gates (det -1)
// have det +-i and therefore leave the Rotation/Unitary2 family.
struct Mat2 {
  Eigen::Matrix2cd m;
};

using Gate = std::variant<Rotation, Unitary2, Named, Mat2>;

// The 2x2 matrix a gate applies to its target.  Throws Error for a
// degenerate Unitary2 (a0 = a1 = 0), a non-finite Rotation angle, or a
// non-unitary Mat2.
Eigen::Matrix2cd gate_matrix(const Gate& g);

// True when the two gates' matrices agree entrywise within tol.
bool gate_close(const Gate& a, const Gate& b, double tol = kUnitaryTol);

bool operator==(const Rotation& a, const Rotation& b);
bool operator==(const Unitary2& a, const Unitary2& b);
bool operator==(const Named& a, const Named& b);
bool operator==(const Mat2& a, const Mat2& b);

// ---------------------------------------------------------------------------
// Controlled gates and circuits
// ---------------------------------------------------------------------------

// One control wire: the gate fires only if `qubit` (1-based) carries basis
// value `value` (1, or 0 for a negated control).
struct Control {
  int qubit = 0;
  int value = 1;
};

inline bool operator==(const Control& a, const Control& b) {
  return a.qubit == b.qubit && a.value == b.value;
}

using ControlList = std::vector<Control>;

struct ControlledGate {
  ControlList controls;  // sorted by qubit, distinct, never the target
  int target = 1;
  Gate gate;
};

// Validates indices, polarities and distinctness, sorts the controls by
// qubit, and assembles the gate.  Throws Error on violation.
ControlledGate make_gate(ControlList controls, int target, Gate gate);

struct Circuit {
  int n = 0;
  std::vector<ControlledGate> gates;

  // Validates the gate against this circuit's width before storing it.
  void append(ControlledGate g);
};

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

// An n-qubit target: amplitudes indexed by basis_index of the qubit values,
// i.e. amplitudes[basis_index("q1 q2 ... qn")].
struct TargetState {
  int n = 0;
  Eigen::VectorXcd amplitudes;
};

// Checks that the length is a power of two and the norm is 1 within
// kNormTol.  With rescale = true a nonzero vector of any norm is accepted
// and divided by its norm.  Throws Error otherwise.
TargetState validate_state(const Eigen::VectorXcd& raw, bool rescale = false);
TargetState validate_state(const std::vector<Complex>& raw, bool rescale = false);

// ---------------------------------------------------------------------------
// Bit conventions: qubit 1 is the most significant position
// ---------------------------------------------------------------------------

// "q1 q2 ... qn" read as a big-endian binary numeral, e.g. "110" -> 6.
std::uint64_t basis_index(std::string_view bits);

// Inverse of basis_index for a fixed width n.
std::string bitstring(std::uint64_t value, int n);

// Value of qubit j (1-based) inside a width-n basis index.
inline int bit_of(std::uint64_t index, int qubit, int n) {
  return static_cast<int>((index >> (n - qubit)) & 1u);
}

}  // namespace qinit
