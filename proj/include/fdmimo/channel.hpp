#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <vector>

#include "fdmimo/config.hpp"
#include "fdmimo/random.hpp"

namespace fdmimo {

using CMatrix = Eigen::MatrixXcd;

/// One coherence block of Rayleigh fading.
struct ChannelBlock {
  CMatrix downlink;      ///< row i is user i's downlink channel h_i
  CMatrix user_to_user;  ///< (i, k) couples user k's pilot into user i; diagonal unused
};

/// Base-station MMSE estimate after `pilot_cycles` uplink pilots per user.
struct ChannelEstimate {
  CMatrix estimate;
  int pilot_cycles = 0;
  double error_variance = 1.0;  ///< per-entry posterior variance
};

ChannelBlock sample_block(const SystemConfig& cfg, RandomStream& rng);

/// Posterior variance of one channel entry after `pilot_cycles` pilots of
/// energy `pilot_power` in unit noise: 1 / (1 + beta * f * P).
double mmse_error_variance(int pilot_cycles, double pilot_power);

/// MMSE estimate from the accumulated observation sum_c (sqrt(fP) h + n_c).
ChannelEstimate mmse_from_statistic(const CMatrix& observation_sum,
                                    int pilot_cycles, double pilot_power);

/// Simulates `pilot_cycles` uplink training cycles on `truth` and returns the
/// base-station estimate. The per-cycle observations enter only through
/// their sum, which is drawn directly (noise variance = pilot_cycles).
ChannelEstimate mmse_update(const ChannelBlock& truth, int pilot_cycles,
                            const SystemConfig& cfg, RandomStream& rng);

/// Accumulates pilots one cycle at a time, so estimates at successive cycle
/// counts are nested (cycle j reuses the pilots of cycles 1..j-1).
class PilotAccumulator {
 public:
  PilotAccumulator(const CMatrix& truth, double pilot_power);

  void add_cycle(RandomStream& rng);
  int cycles() const { return cycles_; }
  ChannelEstimate estimate() const;

 private:
  const CMatrix* truth_;
  double pilot_power_;
  double pilot_amplitude_;
  CMatrix observation_sum_;
  int cycles_ = 0;
};

/// Binary block dump: "FDMB", uint32 M, uint64 count, then per block H and G
/// row-major as interleaved (re, im) float64, native byte order.
void write_blocks(std::ostream& out, std::span<const ChannelBlock> blocks);
std::vector<ChannelBlock> read_blocks(std::istream& in);

}  // namespace fdmimo
