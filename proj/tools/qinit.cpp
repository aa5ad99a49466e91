#include "qinit/circio.hpp"
#include "qinit/core.hpp"
#include "qinit/lower.hpp"
#include "qinit/optimize.hpp"
#include "qinit/presets.hpp"
#include "qinit/sim.hpp"
#include "qinit/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qinit::Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qinit::Error("cannot write '" + path + "'");
  out << content;
}

// {"n": int, "amplitudes": [[re, im], ...]}; a flat array of reals (or a
// mix of reals and [re, im] pairs) is also accepted.
qinit::TargetState read_state_json(const std::string& path, bool normalize) {
  const json doc = json::parse(slurp(path));
  const json* amps_ptr = nullptr;
  if (doc.is_array()) {
    amps_ptr = &doc;
  } else if (doc.is_object() && doc.contains("amplitudes")) {
    amps_ptr = &doc["amplitudes"];
  } else {
    throw qinit::Error(path +
                       ": expected an amplitude array or an object with an \"amplitudes\" array");
  }
  const json& amps = *amps_ptr;
  if (!amps.is_array() || amps.empty())
    throw qinit::Error(path + ": \"amplitudes\" must be a nonempty array");
  std::vector<qinit::Complex> values;
  values.reserve(amps.size());
  for (const json& item : amps) {
    if (item.is_number()) {
      values.emplace_back(item.get<double>(), 0.0);
    } else if (item.is_array() && item.size() == 2 && item[0].is_number() &&
               item[1].is_number()) {
      values.emplace_back(item[0].get<double>(), item[1].get<double>());
    } else {
      throw qinit::Error(path + ": amplitude entries must be reals or [re, im] pairs");
    }
  }
  qinit::TargetState state = qinit::validate_state(values, normalize);
  if (doc.contains("n")) {
    if (!doc["n"].is_number_integer() || doc["n"].get<int>() != state.n)
      throw qinit::Error(path + ": \"n\" disagrees with the amplitude count");
  }
  return state;
}

void write_state_json(const std::string& path, const qinit::TargetState& state) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i)
    amps.push_back({state.amplitudes[i].real(), state.amplitudes[i].imag()});
  const json doc = {{"n", state.n}, {"amplitudes", std::move(amps)}};
  spill(path, doc.dump(2) + "\n");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_synth(const std::string& in, const std::string& out, bool do_optimize, bool do_lower,
              bool normalize) {
  const qinit::TargetState state = read_state_json(in, normalize);
  qinit::Circuit circuit = qinit::synthesize(state);
  if (do_optimize) circuit = qinit::optimize(circuit).circuit;
  if (do_lower) circuit = qinit::lower_circuit(circuit);
  spill(out, qinit::write_text(circuit));
  std::cerr << "wrote " << circuit.gates.size() << " gates for n=" << state.n << " to " << out
            << "\n";
  return 0;
}

int cmd_simulate(const std::string& circuit_path, const std::string& against,
                 bool print_state, bool normalize) {
  const qinit::Circuit circuit = qinit::read_text(slurp(circuit_path));
  const qinit::SimState result = qinit::run(circuit);
  if (print_state) {
    for (Eigen::Index i = 0; i < result.vector.size(); ++i)
      std::cout << qinit::bitstring(static_cast<std::uint64_t>(i), result.n) << " "
                << fmt(result.vector[i].real()) << " " << fmt(result.vector[i].imag()) << "\n";
  }
  if (!against.empty()) {
    const qinit::TargetState target = read_state_json(against, normalize);
    const qinit::Deviation dev = qinit::deviation(result, target);
    std::cout << "max_deviation " << fmt(dev.max_abs) << "\n";
    std::cout << "overlap " << fmt(dev.overlap.real()) << " " << fmt(dev.overlap.imag())
              << "\n";
  }
  if (!print_state && against.empty())
    std::cout << "applied " << circuit.gates.size() << " gates on " << circuit.n
              << " qubits; norm " << fmt(result.vector.norm()) << "\n";
  return 0;
}

int cmd_verify(const std::string& in, double tolerance, bool normalize) {
  const qinit::TargetState state = read_state_json(in, normalize);
  const qinit::Circuit synthesized = qinit::synthesize(state);
  const qinit::Circuit optimized = qinit::optimize(synthesized).circuit;
  const qinit::Circuit lowered = qinit::lower_circuit(optimized);
  const qinit::Deviation dev_opt = qinit::deviation(qinit::run(optimized), state);
  const qinit::Deviation dev_low = qinit::deviation(qinit::run(lowered), state);
  const bool ok = dev_opt.max_abs <= tolerance && dev_low.max_abs <= tolerance;
  std::cout << "synthesized gates: " << synthesized.gates.size() << "\n";
  std::cout << "optimized gates: " << optimized.gates.size() << "\n";
  std::cout << "lowered gates: " << lowered.gates.size() << "\n";
  std::cout << "deviation optimized: " << fmt(dev_opt.max_abs) << "\n";
  std::cout << "deviation lowered: " << fmt(dev_low.max_abs) << "\n";
  std::cout << "tolerance: " << fmt(tolerance) << "\n";
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

int cmd_preset(const std::string& kind, int n, const std::string& sign,
               const std::string& marked, double theta, bool have_theta,
               const std::string& out) {
  qinit::TargetState state;
  if (kind == "uniform") {
    state = qinit::uniform(n);
  } else if (kind == "ghz") {
    if (sign != "+" && sign != "-") throw qinit::Error("--sign must be + or -");
    state = qinit::ghz(n, sign == "+" ? +1 : -1);
  } else if (kind == "grover") {
    if (marked.empty()) throw qinit::Error("grover preset requires --marked");
    if (!have_theta) throw qinit::Error("grover preset requires --theta");
    state = qinit::grover_state({n, marked, theta});
  } else {
    throw qinit::Error("unknown preset '" + kind + "' (uniform|ghz|grover)");
  }
  write_state_json(out, state);
  std::cerr << "wrote " << kind << " state for n=" << state.n << " to " << out << "\n";
  return 0;
}

int cmd_stats(const std::string& circuit_path, const std::string& csv_path) {
  const qinit::Circuit circuit = qinit::read_text(slurp(circuit_path));
  const qinit::Stats st = qinit::stats(circuit);
  const long lowered = static_cast<long>(qinit::lower_circuit(circuit).gates.size());
  std::cout << "n " << st.n << "\ngates " << st.gates << "\nmulti_controlled "
            << st.multi_controlled << "\nparams " << st.params << "\ndepth " << st.depth
            << "\nlowered_gates " << lowered << "\n";
  for (const auto& [kind, count] : st.by_kind) std::cout << "kind " << kind << " " << count << "\n";
  for (const auto& [arity, count] : st.by_arity)
    std::cout << "controls " << arity << " " << count << "\n";
  if (!csv_path.empty())
    spill(csv_path, qinit::stats_csv_header() + "\n" + qinit::stats_csv_row(st, lowered) + "\n");
  return 0;
}

int cmd_bench(int n_max, int trials, std::uint64_t seed, const std::string& csv_path) {
  std::string csv = qinit::stats_csv_header() + "\n";
  double worst = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    for (int trial = 0; trial < trials; ++trial) {
      const qinit::TargetState state =
          qinit::random_state(n, qinit::trial_seed(seed, static_cast<std::uint64_t>(n),
                                                   static_cast<std::uint64_t>(trial)));
      const qinit::Circuit synthesized = qinit::synthesize(state);
      const qinit::Circuit optimized = qinit::optimize(synthesized).circuit;
      const qinit::Circuit lowered = qinit::lower_circuit(optimized);
      const qinit::Deviation dev = qinit::deviation(qinit::run(lowered), state);
      worst = std::max(worst, dev.max_abs);

      // In this table multi_controlled counts every synthesized gate of the
      // layered form (N-1 multi-controlled primitives on a nowhere-zero
      // state), not just arities >= 2 as in the stats command.
      qinit::Stats st = qinit::stats(synthesized);
      st.multi_controlled = st.gates;
      csv += qinit::stats_csv_row(st, static_cast<long>(lowered.gates.size())) + "\n";
    }
  }
  if (!csv_path.empty()) spill(csv_path, csv);
  std::cerr << "bench: n<=" << n_max << ", " << trials
            << " trials per n, worst lowered round-trip deviation " << fmt(worst) << "\n";
  if (worst > qinit::kPrepTol) {
    std::cerr << "bench: round-trip deviation exceeds " << fmt(qinit::kPrepTol) << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"layered state-preparation compiler"};
  app.require_subcommand(1);

  std::string in_path, out_path, circuit_path, against_path, csv_path;
  std::string preset_kind, sign = "+", marked;
  bool do_optimize = false, do_lower = false, normalize = false, print_state = false;
  double tolerance = 1e-9, theta = 0.0;
  int n = 0, n_max = 10, trials = 50;
  std::uint64_t seed = 1;

  CLI::App* synth = app.add_subcommand("synth", "synthesize a circuit from a state file");
  synth->add_option("--in", in_path, "input state JSON")->required();
  synth->add_option("--out", out_path, "output circuit file")->required();
  synth->add_flag("--optimize", do_optimize, "merge siblings and recognize named gates");
  synth->add_flag("--lower", do_lower, "lower to gates with at most one control");
  synth->add_flag("--normalize", normalize, "rescale the input to unit norm");

  CLI::App* simulate = app.add_subcommand("simulate", "run a circuit file from |0...0>");
  simulate->add_option("--circuit", circuit_path, "circuit file")->required();
  simulate->add_option("--against", against_path, "state JSON to compare with");
  simulate->add_flag("--print-state", print_state, "print the full state vector");
  simulate->add_flag("--normalize", normalize, "rescale the comparison state");

  CLI::App* verify = app.add_subcommand("verify", "synthesize, optimize, lower, and check");
  verify->add_option("--in", in_path, "input state JSON")->required();
  verify->add_option("--tolerance", tolerance, "max allowed componentwise deviation");
  verify->add_flag("--normalize", normalize, "rescale the input to unit norm");

  CLI::App* preset = app.add_subcommand("preset", "write a named state file");
  preset->add_option("kind", preset_kind, "uniform|ghz|grover")->required();
  preset->add_option("--n", n, "qubit count")->required();
  preset->add_option("--sign", sign, "ghz sign, + or -");
  preset->add_option("--marked", marked, "grover marked bitstring");
  CLI::Option* theta_opt = preset->add_option("--theta", theta, "grover mixing angle (radians)");
  preset->add_option("--out", out_path, "output state JSON")->required();

  CLI::App* stats_cmd = app.add_subcommand("stats", "report circuit statistics");
  stats_cmd->add_option("--circuit", circuit_path, "circuit file")->required();
  stats_cmd->add_option("--csv", csv_path, "also write a one-row CSV");

  CLI::App* bench = app.add_subcommand("bench", "seeded random round-trips + count table");
  bench->add_option("--n-max", n_max, "largest qubit count");
  bench->add_option("--trials", trials, "states per qubit count");
  bench->add_option("--seed", seed, "base seed");
  bench->add_option("--csv", csv_path, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (synth->parsed()) return cmd_synth(in_path, out_path, do_optimize, do_lower, normalize);
    if (simulate->parsed())
      return cmd_simulate(circuit_path, against_path, print_state, normalize);
    if (verify->parsed()) return cmd_verify(in_path, tolerance, normalize);
    if (preset->parsed())
      return cmd_preset(preset_kind, n, sign, marked, theta, theta_opt->count() > 0, out_path);
    if (stats_cmd->parsed()) return cmd_stats(circuit_path, csv_path);
    if (bench->parsed()) return cmd_bench(n_max, trials, seed, csv_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
