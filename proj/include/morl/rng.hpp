#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace morl {

/// Deterministic 64-bit-seeded random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniform variates are formed from the top 53 bits of one engine
/// draw, so every variate consumes exactly one engine output and the stream is
/// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform variate in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Maps a variate in [0, 1) to an index in [0, n).
  static std::size_t index_from(double u, std::size_t n) {
    auto i = static_cast<std::size_t>(u * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  std::size_t uniform_index(std::size_t n) { return index_from(uniform(), n); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace morl
