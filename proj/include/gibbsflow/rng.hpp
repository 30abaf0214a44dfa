#pragma once

#include <cmath>
#include <cstdint>

namespace gibbsflow {

/// Counter-based splitmix64 stream. The whole simulation state is one
/// 64-bit counter, so streams can be derived and replayed cheaply and the
/// same seed reproduces the same draws on any platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Independent stream for (seed, stream-index) pairs, e.g. one per path.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return finalize((seed + 0x9E3779B97F4A7C15ull) ^
                    finalize(stream * 0xBF58476D1CE4E5B9ull + 0x94D049BB133111EBull));
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    return finalize(z);
  }

  /// Uniform in [0, 1).
  double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Exponential with the given rate; rate must be positive.
  double next_exponential(double rate) {
    // 1 - u01 lies in (0, 1], so the log is finite.
    return -std::log(1.0 - next_u01()) / rate;
  }

  /// Index in [0, n) proportional to the (non-normalized) weights.
  template <typename WeightAt>
  int next_weighted(int n, double total, WeightAt&& weight_at) {
    double u = next_u01() * total;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += weight_at(i);
      if (u < acc) return i;
    }
    return n - 1;  // guards against roundoff at the top end
  }

 private:
  std::uint64_t state_;
};

}  // namespace gibbsflow
