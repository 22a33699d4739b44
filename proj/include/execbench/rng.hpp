#pragma once

// Seeded random source with platform-independent derived draws.

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace execbench {

std::uint64_t splitmix64(std::uint64_t x);
/// Stable per-item seed from a global seed and an identifier.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view id);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  /// Uniform in [0, 1).
  double unit();
  /// Index drawn with probability proportional to `weights`.
  std::size_t weighted(const std::vector<double>& weights);

  template <class T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[below(i)]);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace execbench
