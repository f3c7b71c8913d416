#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace fdmimo {

/// Sample mean with its standard error.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Pairwise (cascade) summation; the result depends only on the order of
/// `values`, never on how they were produced.
inline double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

inline Estimate mean_and_error(std::span<const double> samples) {
  Estimate e;
  const auto n = samples.size();
  if (n == 0) return e;
  e.mean = pairwise_sum(samples) / static_cast<double>(n);
  if (n < 2) return e;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = samples[i] - e.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  e.std_error = std::sqrt(var / static_cast<double>(n));
  return e;
}

}  // namespace fdmimo
