#include "qinit/circio.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace qinit {

namespace {

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string kind_name(const Gate& g) {
  if (std::holds_alternative<Rotation>(g)) return "ROT";
  if (std::holds_alternative<Unitary2>(g)) return "U2";
  if (std::holds_alternative<Mat2>(g)) return "MAT";
  switch (std::get<Named>(g).kind) {
    case NamedKind::I: return "I";
    case NamedKind::H: return "H";
    case NamedKind::X: return "X";
  }
  throw Error("unknown named gate");
}

std::vector<double> gate_params(const Gate& g) {
  if (const auto* r = std::get_if<Rotation>(&g)) return {r->theta};
  if (const auto* u = std::get_if<Unitary2>(&g))
    return {u->a0.real(), u->a0.imag(), u->a1.real(), u->a1.imag()};
  if (const auto* m = std::get_if<Mat2>(&g))
    return {m->m(0, 0).real(), m->m(0, 0).imag(), m->m(0, 1).real(), m->m(0, 1).imag(),
            m->m(1, 0).real(), m->m(1, 0).imag(), m->m(1, 1).real(), m->m(1, 1).imag()};
  return {};
}

}  // namespace

std::string write_text(const Circuit& circuit) {
  std::string out;
  out.reserve(64 + circuit.gates.size() * 96);
  out += "QUBITS " + std::to_string(circuit.n) + "\n";
  for (const ControlledGate& g : circuit.gates) {
    out += "GATE " + kind_name(g.gate) + " target=q" + std::to_string(g.target) +
           " controls=[";
    for (size_t i = 0; i < g.controls.size(); ++i) {
      if (i) out += ',';
      out += g.controls[i].value ? '+' : '-';
      out += 'q' + std::to_string(g.controls[i].qubit);
    }
    out += "] params=[";
    const std::vector<double> params = gate_params(g.gate);
    for (size_t i = 0; i < params.size(); ++i) {
      if (i) out += ',';
      out += fmt_real(params[i]);
    }
    out += "]\n";
  }
  return out;
}

namespace {

// Splits "a,b,c" on commas; empty input gives no tokens.
std::vector<std::string> split_list(std::string_view body) {
  std::vector<std::string> items;
  size_t start = 0;
  while (start <= body.size() && !body.empty()) {
    const size_t comma = body.find(',', start);
    if (comma == std::string_view::npos) {
      items.emplace_back(body.substr(start));
      break;
    }
    items.emplace_back(body.substr(start, comma - start));
    start = comma + 1;
  }
  return items;
}

std::string_view expect_field(std::string_view token, std::string_view prefix, int line) {
  if (token.substr(0, prefix.size()) != prefix)
    throw ParseError(line, "expected '" + std::string(prefix) + "...', got '" +
                               std::string(token) + "'");
  return token.substr(prefix.size());
}

std::string_view expect_bracketed(std::string_view body, int line) {
  if (body.empty() || body.front() != '[' || body.back() != ']')
    throw ParseError(line, "expected a [...] list");
  return body.substr(1, body.size() - 2);
}

int parse_int(std::string_view s, int line, const char* what) {
  const std::string str(s);
  char* end = nullptr;
  const long v = std::strtol(str.c_str(), &end, 10);
  if (end == str.c_str() || *end != '\0')
    throw ParseError(line, std::string("malformed ") + what + " '" + str + "'");
  return static_cast<int>(v);
}

double parse_real(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ParseError(line, "malformed real '" + s + "'");
  return v;
}

Gate build_gate(const std::string& kind, const std::vector<double>& p, int line) {
  const auto want = [&](size_t count) {
    if (p.size() != count)
      throw ParseError(line, kind + " expects " + std::to_string(count) + " params, got " +
                                 std::to_string(p.size()));
  };
  if (kind == "ROT") {
    want(1);
    return Rotation{p[0]};
  }
  if (kind == "U2") {
    want(4);
    return Unitary2{{p[0], p[1]}, {p[2], p[3]}};
  }
  if (kind == "MAT") {
    want(8);
    Eigen::Matrix2cd m;
    m << Complex{p[0], p[1]}, Complex{p[2], p[3]}, Complex{p[4], p[5]}, Complex{p[6], p[7]};
    return Mat2{m};
  }
  if (kind == "H" || kind == "X" || kind == "I") {
    want(0);
    const NamedKind nk = kind == "H" ? NamedKind::H : kind == "X" ? NamedKind::X : NamedKind::I;
    return Named{nk};
  }
  throw ParseError(line, "unknown gate kind '" + kind + "'");
}

}  // namespace

Circuit read_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  bool have_header = false;
  Circuit circuit;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::istringstream ls(raw);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(std::move(t));
    if (tokens.empty() || tokens[0][0] == '#') continue;
    if (tokens[0] == "QUBITS") {
      if (have_header) throw ParseError(line_no, "duplicate QUBITS header");
      if (tokens.size() != 2) throw ParseError(line_no, "QUBITS expects one integer");
      const int n = parse_int(tokens[1], line_no, "qubit count");
      if (n < 1 || n > 30) throw ParseError(line_no, "qubit count must be in [1, 30]");
      circuit.n = n;
      have_header = true;
      continue;
    }
    if (tokens[0] != "GATE") throw ParseError(line_no, "expected GATE or QUBITS");
    if (!have_header) throw ParseError(line_no, "GATE before QUBITS header");
    if (tokens.size() != 5)
      throw ParseError(line_no, "expected GATE <kind> target=... controls=[...] params=[...]");

    const std::string& kind = tokens[1];
    const int target =
        parse_int(expect_field(expect_field(tokens[2], "target=", line_no), "q", line_no),
                  line_no, "target qubit");
    ControlList controls;
    for (const std::string& item : split_list(
             expect_bracketed(expect_field(tokens[3], "controls=", line_no), line_no))) {
      if (item.size() < 3 || (item[0] != '+' && item[0] != '-') || item[1] != 'q')
        throw ParseError(line_no, "malformed control '" + item + "'");
      controls.push_back({parse_int(std::string_view(item).substr(2), line_no, "control qubit"),
                          item[0] == '+' ? 1 : 0});
    }
    std::vector<double> params;
    for (const std::string& item : split_list(
             expect_bracketed(expect_field(tokens[4], "params=", line_no), line_no)))
      params.push_back(parse_real(item, line_no));

    try {
      circuit.append(make_gate(std::move(controls), target, build_gate(kind, params, line_no)));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!have_header) throw ParseError(line_no ? line_no : 1, "missing QUBITS header");
  return circuit;
}

namespace {

// ZYZ + phase split of a unitary: u = exp(i gamma) * u3(theta, phi, lambda)
// with u3 as defined by OpenQASM 2.
struct ZyzAngles {
  double theta = 0.0, phi = 0.0, lambda = 0.0, gamma = 0.0;
};

ZyzAngles zyz_decompose(const Eigen::Matrix2cd& u) {
  ZyzAngles a;
  const double n00 = std::abs(u(0, 0)), n10 = std::abs(u(1, 0));
  a.theta = 2.0 * std::atan2(n10, n00);
  if (n10 <= 1e-15) {  // diagonal
    a.gamma = std::arg(u(0, 0));
    a.lambda = std::arg(u(1, 1)) - a.gamma;
    return a;
  }
  if (n00 <= 1e-15) {  // antidiagonal
    a.phi = std::arg(u(1, 0));
    a.lambda = std::arg(-u(0, 1));
    return a;
  }
  a.gamma = std::arg(u(0, 0));
  a.phi = std::arg(u(1, 0)) - a.gamma;
  a.lambda = std::arg(-u(0, 1)) - a.gamma;
  return a;
}

std::string q(int qubit) { return "q[" + std::to_string(qubit - 1) + "]"; }

}  // namespace

std::string export_qasm(const Circuit& circuit) {
  std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" +
                    std::to_string(circuit.n) + "];\n";
  for (const ControlledGate& g : circuit.gates) {
    if (g.controls.size() > 1)
      throw Error("QASM export expects a lowered circuit (at most one control per gate)");
    const Eigen::Matrix2cd m = gate_matrix(g.gate);

    if (g.controls.empty()) {
      if (const auto* named = std::get_if<Named>(&g.gate)) {
        switch (named->kind) {
          case NamedKind::I: out += "id " + q(g.target) + ";\n"; continue;
          case NamedKind::H: out += "h " + q(g.target) + ";\n"; continue;
          case NamedKind::X: out += "x " + q(g.target) + ";\n"; continue;
        }
      }
      if (const auto* rot = std::get_if<Rotation>(&g.gate)) {
        out += "u3(" + fmt_real(2.0 * rot->theta) + ",0,pi) " + q(g.target) + ";\n";
        continue;
      }
      // General 1-qubit gate, global phase dropped.
      const ZyzAngles a = zyz_decompose(m);
      out += "u3(" + fmt_real(a.theta) + "," + fmt_real(a.phi) + "," + fmt_real(a.lambda) +
             ") " + q(g.target) + ";\n";
      continue;
    }

    const Control ctl = g.controls[0];
    if (ctl.value == 0) out += "x " + q(ctl.qubit) + ";\n";
    const bool is_x = m(0, 0) == 0.0 && m(1, 1) == 0.0 && m(0, 1) == 1.0 && m(1, 0) == 1.0;
    if (is_x) {
      out += "cx " + q(ctl.qubit) + "," + q(g.target) + ";\n";
    } else {
      const ZyzAngles a = zyz_decompose(m);
      if (std::abs(a.gamma) > 1e-15)
        out += "u1(" + fmt_real(a.gamma) + ") " + q(ctl.qubit) + ";\n";
      out += "cu3(" + fmt_real(a.theta) + "," + fmt_real(a.phi) + "," + fmt_real(a.lambda) +
             ") " + q(ctl.qubit) + "," + q(g.target) + ";\n";
    }
    if (ctl.value == 0) out += "x " + q(ctl.qubit) + ";\n";
  }
  return out;
}

Stats stats(const Circuit& circuit) {
  Stats s;
  s.n = circuit.n;
  std::vector<long> wire_depth(static_cast<size_t>(circuit.n) + 1, 0);
  for (const ControlledGate& g : circuit.gates) {
    ++s.gates;
    ++s.by_kind[kind_name(g.gate)];
    ++s.by_arity[static_cast<int>(g.controls.size())];
    if (g.controls.size() >= 2) ++s.multi_controlled;
    if (std::holds_alternative<Rotation>(g.gate)) s.params += 1;
    if (std::holds_alternative<Unitary2>(g.gate)) s.params += 3;
    if (std::holds_alternative<Mat2>(g.gate)) s.params += 4;

    long level = wire_depth[static_cast<size_t>(g.target)];
    for (const Control& c : g.controls)
      level = std::max(level, wire_depth[static_cast<size_t>(c.qubit)]);
    ++level;
    wire_depth[static_cast<size_t>(g.target)] = level;
    for (const Control& c : g.controls) wire_depth[static_cast<size_t>(c.qubit)] = level;
    s.depth = std::max(s.depth, level);
  }
  return s;
}

std::string stats_csv_header() { return "n,gates,multi_controlled,params,depth,lowered_gates"; }

std::string stats_csv_row(const Stats& s, long lowered_gates) {
  return std::to_string(s.n) + "," + std::to_string(s.gates) + "," +
         std::to_string(s.multi_controlled) + "," + std::to_string(s.params) + "," +
         std::to_string(s.depth) + "," + std::to_string(lowered_gates);
}

}  // namespace qinit
