#include "qinit/presets.hpp"

#include <cmath>
#include <random>

namespace qinit {

TargetState uniform(int n) {
  if (n < 1 || n > 30) throw Error("uniform preset needs n in [1, 30]");
  const Eigen::Index size = Eigen::Index{1} << n;
  const double amp = 1.0 / std::sqrt(static_cast<double>(size));
  return TargetState{n, Eigen::VectorXcd::Constant(size, Complex{amp, 0.0})};
}

TargetState ghz(int n, int sign) {
  if (n < 2 || n > 30) throw Error("ghz preset needs n in [2, 30]");
  if (sign != 1 && sign != -1) throw Error("ghz sign must be +1 or -1");
  const Eigen::Index size = Eigen::Index{1} << n;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size);
  const double amp = 1.0 / std::sqrt(2.0);
  v[0] = amp;
  v[size - 1] = sign * amp;
  return TargetState{n, std::move(v)};
}

TargetState grover_state(const GroverSpec& spec) {
  if (spec.n < 1 || spec.n > 30) throw Error("grover preset needs n in [1, 30]");
  if (static_cast<int>(spec.marked.size()) != spec.n)
    throw Error("marked bitstring length must equal n");
  if (!std::isfinite(spec.theta)) throw Error("theta must be finite");
  const std::uint64_t marked = basis_index(spec.marked);
  const Eigen::Index size = Eigen::Index{1} << spec.n;
  const double rest = std::cos(spec.theta) / std::sqrt(static_cast<double>(size - 1));
  Eigen::VectorXcd v = Eigen::VectorXcd::Constant(size, Complex{rest, 0.0});
  v[static_cast<Eigen::Index>(marked)] = std::sin(spec.theta);
  return TargetState{spec.n, std::move(v)};
}

double grover_omega(int n, int k, double theta) {
  if (n < 1) throw Error("grover_omega needs n >= 1");
  if (k < 1 || k > n) throw Error("grover_omega needs 1 <= k <= n");
  const double c = std::cos(theta);
  if (c == 0.0) throw Error("grover_omega is undefined at cos(theta) = 0");
  const double big_n = std::pow(2.0, n);
  const double two_k = std::pow(2.0, k);
  const double s = std::sin(theta);
  return std::sqrt(((big_n - two_k) * c * c + two_k * (big_n - 1.0) * s * s) /
                   (big_n * c * c));
}

namespace {

TargetState gaussian_state(int n, std::uint64_t seed, bool real_only) {
  if (n < 1 || n > 30) throw Error("random state needs n in [1, 30]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::Index size = Eigen::Index{1} << n;
  Eigen::VectorXcd v(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v[i] = real_only ? Complex{re, 0.0} : Complex{re, im};
  }
  return validate_state(v, /*rescale=*/true);
}

}  // namespace

TargetState random_state(int n, std::uint64_t seed) { return gaussian_state(n, seed, false); }

TargetState random_real_state(int n, std::uint64_t seed) {
  return gaussian_state(n, seed, true);
}

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t n, std::uint64_t trial) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (n * 1000003ULL + trial + 1ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace qinit
