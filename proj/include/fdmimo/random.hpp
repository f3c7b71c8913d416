#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace fdmimo {

/// A seeded random stream. Independent streams are derived from a base seed
/// and a stream index, so the draws of block `i` never depend on how blocks
/// are distributed over worker threads.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);
  RandomStream(std::uint64_t seed, std::uint64_t stream_index);

  /// Circularly symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_gaussian(double variance = 1.0);
  double uniform();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finaliser; used to decorrelate (seed, index) pairs.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace fdmimo
