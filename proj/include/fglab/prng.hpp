#pragma once

#include <cstdint>

namespace fglab {

/// Deterministic 64-bit generator (splitmix64). The exact algorithm is part
/// of the report format contract: identical seeds reproduce identical
/// experiment inputs on any platform.
class Prng {
public:
  explicit Prng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform-ish value in [0, m); documented as next() % m.
  uint64_t below(uint64_t m) { return next() % m; }

private:
  uint64_t state_;
};

}  // namespace fglab
