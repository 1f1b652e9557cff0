#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace dualdi {

/// Stable 64-bit seed derivation from a base seed and string labels
/// (FNV-1a over the labels, finished with splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::string_view a, std::string_view b = {});
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seeded generator whose derived distributions are computed here rather
/// than by <random> distribution classes, so draws are identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [0, n), n > 0, without modulo bias.
  std::uint64_t below(std::uint64_t n);
  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  /// Standard normal via Box-Muller (no cached second value).
  double normal();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dualdi
