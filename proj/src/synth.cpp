#include "qinit/synth.hpp"

#include <cmath>

namespace qinit {

namespace {

// weights[j][p] = subtree weight of the length-j prefix p, built pairwise
// from the bottom so parents are exact sums of their two children.
std::vector<std::vector<double>> weight_tree(const TargetState& s) {
  std::vector<std::vector<double>> w(static_cast<size_t>(s.n) + 1);
  auto& leaves = w[static_cast<size_t>(s.n)];
  leaves.resize(static_cast<size_t>(s.amplitudes.size()));
  for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i)
    leaves[static_cast<size_t>(i)] = std::norm(s.amplitudes[i]);
  for (int j = s.n - 1; j >= 0; --j) {
    auto& level = w[static_cast<size_t>(j)];
    const auto& below = w[static_cast<size_t>(j) + 1];
    level.resize(below.size() / 2);
    for (size_t p = 0; p < level.size(); ++p) level[p] = below[2 * p] + below[2 * p + 1];
  }
  return w;
}

std::uint64_t prefix_index(std::string_view prefix) {
  return prefix.empty() ? 0 : basis_index(prefix);
}

double angle_from(double w0, double w1) { return std::atan2(std::sqrt(w1), std::sqrt(w0)); }

}  // namespace

double subtree_weight(const TargetState& state, std::string_view prefix) {
  if (static_cast<int>(prefix.size()) > state.n)
    throw Error("prefix longer than the state width");
  const auto w = weight_tree(state);
  return w[prefix.size()][prefix_index(prefix)];
}

std::optional<double> rotation_angle(const TargetState& state, int layer,
                                     std::string_view prefix) {
  if (layer < 1 || layer > state.n) throw Error("rotation layer out of range");
  if (static_cast<int>(prefix.size()) != layer - 1)
    throw Error("prefix length must be layer - 1");
  const auto w = weight_tree(state);
  const std::uint64_t p = prefix_index(prefix);
  if (w[prefix.size()][p] == 0.0) return std::nullopt;
  return angle_from(w[prefix.size() + 1][2 * p], w[prefix.size() + 1][2 * p + 1]);
}

std::optional<FinalEntry> final_entry(const TargetState& state, std::string_view prefix) {
  if (static_cast<int>(prefix.size()) != state.n - 1)
    throw Error("prefix length must be n - 1");
  const std::uint64_t p = prefix_index(prefix);
  const Complex a0 = state.amplitudes[static_cast<Eigen::Index>(2 * p)];
  const Complex a1 = state.amplitudes[static_cast<Eigen::Index>(2 * p + 1)];
  if (std::norm(a0) + std::norm(a1) == 0.0) return std::nullopt;
  return FinalEntry{a0, a1};
}

AngleTree build_angle_tree(const TargetState& state) {
  const auto w = weight_tree(state);
  AngleTree t;
  t.n = state.n;
  t.rotations.resize(static_cast<size_t>(state.n) - 1);
  for (int j = 1; j <= state.n - 1; ++j) {
    auto& layer = t.rotations[static_cast<size_t>(j) - 1];
    layer.resize(size_t{1} << (j - 1));
    for (size_t p = 0; p < layer.size(); ++p) {
      if (w[static_cast<size_t>(j) - 1][p] == 0.0) continue;
      layer[p] = angle_from(w[static_cast<size_t>(j)][2 * p],
                            w[static_cast<size_t>(j)][2 * p + 1]);
    }
  }
  t.last.resize(size_t{1} << (state.n - 1));
  for (size_t p = 0; p < t.last.size(); ++p) {
    if (w[static_cast<size_t>(state.n) - 1][p] == 0.0) continue;
    t.last[p] = FinalEntry{state.amplitudes[static_cast<Eigen::Index>(2 * p)],
                           state.amplitudes[static_cast<Eigen::Index>(2 * p + 1)]};
  }
  return t;
}

bool final_entry_trivial(const FinalEntry& e) {
  return e.a1 == Complex{0.0, 0.0} && e.a0.imag() == 0.0 && e.a0.real() > 0.0;
}

Gate final_gate(const FinalEntry& e) {
  if (e.a0.imag() == 0.0 && e.a1.imag() == 0.0)
    return Rotation{std::atan2(e.a1.real(), e.a0.real())};
  return Unitary2{e.a0, e.a1};
}

long AngleTree::entry_count() const {
  long count = 0;
  for (const auto& layer : rotations)
    for (const auto& slot : layer) count += slot.has_value();
  for (const auto& slot : last) count += slot.has_value();
  return count;
}

long AngleTree::gate_count() const {
  long count = 0;
  for (const auto& layer : rotations)
    for (const auto& slot : layer) count += slot.has_value() && *slot != 0.0;
  for (const auto& slot : last) count += slot.has_value() && !final_entry_trivial(*slot);
  return count;
}

long AngleTree::parameter_count() const {
  long count = 0;
  for (const auto& layer : rotations)
    for (const auto& slot : layer) count += slot.has_value() && *slot != 0.0;
  for (const auto& slot : last) {
    if (!slot.has_value() || final_entry_trivial(*slot)) continue;
    count += std::holds_alternative<Rotation>(final_gate(*slot)) ? 1 : 3;
  }
  return count;
}

namespace {

ControlList prefix_controls(std::uint64_t p, int len) {
  ControlList controls;
  controls.reserve(static_cast<size_t>(len));
  for (int i = 1; i <= len; ++i)
    controls.push_back({i, static_cast<int>((p >> (len - i)) & 1u)});
  return controls;
}

}  // namespace

Circuit synthesize(const AngleTree& tree) {
  Circuit c{tree.n, {}};
  for (int j = 1; j <= tree.n - 1; ++j) {
    const auto& layer = tree.rotations[static_cast<size_t>(j) - 1];
    for (size_t p = 0; p < layer.size(); ++p) {
      if (!layer[p].has_value() || *layer[p] == 0.0) continue;
      c.append(make_gate(prefix_controls(p, j - 1), j, Rotation{*layer[p]}));
    }
  }
  for (size_t p = 0; p < tree.last.size(); ++p) {
    if (!tree.last[p].has_value() || final_entry_trivial(*tree.last[p])) continue;
    c.append(make_gate(prefix_controls(p, tree.n - 1), tree.n, final_gate(*tree.last[p])));
  }
  return c;
}

Circuit synthesize(const TargetState& state) { return synthesize(build_angle_tree(state)); }

}  // namespace qinit
