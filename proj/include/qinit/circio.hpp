#pragma once

#include "qinit/core.hpp"

#include <map>
#include <string>
#include <string_view>

namespace qinit {

struct ParseError : Error {
  ParseError(int line_number, const std::string& what)
      : Error("line " + std::to_string(line_number) + ": " + what), line(line_number) {}
  int line = 0;
};

// Text form, one gate per line:
//   QUBITS <n>
//   GATE <kind> target=q<j> controls=[+q<i>,-q<i>,...] params=[...]
// kinds: ROT (1 param), U2 (4 params: re a0, im a0, re a1, im a1),
// H/X/I (0 params), MAT (8 params: the unitary row-major, re before im).
// A '-' control fires on |0>.  Reals carry 17 significant digits, so
// write_text . read_text is the identity on gate parameters.
std::string write_text(const Circuit& circuit);

// Inverse of write_text.  Blank lines and lines starting with '#' are
// skipped.  Throws ParseError (with the line number) on malformed input,
// unknown kinds, wrong parameter counts, or gates that fail validation.
Circuit read_text(std::string_view text);

// OPENQASM 2.0 export for lowered circuits (gates with at most one
// control).  Throws Error on a gate with two or more controls.  Rotation
// gates map exactly to u3(2*theta, 0, pi); other uncontrolled gates map to
// u3 up to a dropped global phase; controlled gates map to cu3 with a u1
// phase correction on the control wire, exact including phase.
std::string export_qasm(const Circuit& circuit);

struct Stats {
  int n = 0;
  long gates = 0;
  long multi_controlled = 0;  // gates with two or more controls
  long params = 0;            // ROT 1, U2 3, MAT 4, named 0
  long depth = 0;             // wire-conflict schedule depth
  std::map<std::string, long> by_kind;
  std::map<int, long> by_arity;  // control count -> gates
};

Stats stats(const Circuit& circuit);

// CSV schema shared by the stats and bench commands.
std::string stats_csv_header();
std::string stats_csv_row(const Stats& s, long lowered_gates);

}  // namespace qinit
