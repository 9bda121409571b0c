#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace pathtext {

/// Derives an independent sub-seed for a named stage from a root seed.
/// Stable across platforms and releases.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stage);

/// Seeded generator with platform-independent helpers.
///
/// std::mt19937_64's raw output is fully specified by the standard, but the
/// standard distributions are not, so uniform draws are built here directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::size_t uniform_index(std::size_t bound);

  /// Uniform double in [0, 1) with 53 bits of resolution.
  double uniform_real();

  /// Draws an index with probability proportional to weights[i].
  /// Weights must be nonnegative with a positive sum.
  std::size_t sample_discrete(std::span<const double> weights);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pathtext
