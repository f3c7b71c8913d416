#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "fdmimo/channel.hpp"

namespace fdmimo {

/// Zero-forcing beams; column k is the unit-norm beam for user k.
struct Precoder {
  CMatrix beams;
};

/// Per-user received powers for one channel realization, both including the
/// P/M per-stream power.
struct LinkPowers {
  Eigen::VectorXd signal;  ///< |h_k v_k|^2 P/M
  Eigen::VectorXd ibi;     ///< sum_{j != k} |h_k v_j|^2 P/M
};

/// Thrown when the estimate is too ill-conditioned to invert; the caller
/// resamples the block.
class SingularEstimateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMaxConditionNumber = 1e12;

/// Normalized columns of the right pseudo-inverse of `estimate`.
Precoder zero_forcing(const CMatrix& estimate);
Precoder zero_forcing(const ChannelEstimate& estimate);

LinkPowers link_powers(const CMatrix& truth, const Precoder& precoder,
                       double power);
LinkPowers link_powers(const ChannelBlock& truth, const Precoder& precoder,
                       const SystemConfig& cfg);

}  // namespace fdmimo
