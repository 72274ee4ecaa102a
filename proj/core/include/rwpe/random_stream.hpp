#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rwpe {

/// SplitMix64 finalizer, used to derive independent stream seeds.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of sub-stream `index` of `parent`. Used both for per-trial streams
/// derived from a master seed and for the per-purpose streams of one trial.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(parent) ^ splitmix64(~index));
}

/// Reproducible random stream.
///
/// Engine: std::mt19937_64 seeded with a single 64-bit value (fully specified
/// by the C++ standard). Uniforms take the top 53 bits; normals use the
/// Box–Muller transform. Neither conversion goes through the
/// implementation-defined standard distributions, so a given seed yields the
/// same variates with any conforming standard library.
class RandomStream {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64-derive+boxmuller/v1";

  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_below() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

  /// Standard normal variate.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rwpe
