#include "fdmimo/random.hpp"

#include <cmath>

namespace fdmimo {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : engine_(mix_seed(seed, 0)) {}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index)
    : engine_(mix_seed(mix_seed(seed, 0), stream_index + 1)) {}

std::complex<double> RandomStream::complex_gaussian(double variance) {
  const double scale = std::sqrt(variance / 2.0);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {scale * re, scale * im};
}

double RandomStream::uniform() {
  return std::generate_canonical<double, 53>(engine_);
}

}  // namespace fdmimo
