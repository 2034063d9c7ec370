#pragma once

#include <cstdint>

namespace halfline {

/// Counter-based stream: the draws for sample `index` depend only on (seed, stream, index),
/// so sampling loops give identical results whatever order or worker evaluates them.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
      : state_(mix(mix(seed ^ 0x9e3779b97f4a7c15ULL) ^ stream) ^ mix(index + 0x632be59bd9b4e019ULL)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform in the open interval (-r, r) for r > 0.
  double symmetric(double r) {
    double x;
    do {
      x = uniform(-r, r);
    } while (x == -r);
    return x;
  }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace halfline
