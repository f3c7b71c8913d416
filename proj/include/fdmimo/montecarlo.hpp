#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "fdmimo/config.hpp"
#include "fdmimo/optimizer.hpp"
#include "fdmimo/random.hpp"
#include "fdmimo/rates.hpp"
#include "fdmimo/stats.hpp"

namespace fdmimo {

/// How inter-node interference enters the SINR during other users' pilots.
enum class IniModel {
  deterministic,  ///< fixed power alpha f P
  sampled,        ///< alpha |g_ik|^2 f P from the block's user-to-user channels
};

struct SimulationOptions {
  IniModel ini = IniModel::deterministic;
  int threads = 1;
};

/// Symbol-level rates of one simulated coherence block, averaged over users.
/// Entry c of the per-cycle vectors belongs to training cycle j = c + 2.
struct BlockTrace {
  std::vector<double> own_pilot;    ///< rate in the user's own pilot symbol
  std::vector<double> other_pilot;  ///< rate in the other users' pilot symbols
  double data_rate = 0.0;           ///< post-training rate, final estimate
  double genie_rate = 0.0;          ///< perfect-CSI ZF rate on the same channel
};

/// Rates of one block for every pilot-cycle count b = 1..max_cycles, with
/// estimates nested across b. Index 0 is unused.
struct CycleRates {
  double genie = 0.0;
  std::vector<double> no_ini;
  std::vector<double> with_ini;
};

/// Simulates one block and returns per-cycle rates. Near-singular estimates
/// discard the block and draw a fresh one from the same stream.
CycleRates simulate_cycle_rates(const SystemConfig& cfg, int max_cycles,
                                RandomStream& rng,
                                IniModel ini = IniModel::deterministic);

/// One block of full-duplex training with `training_symbols` pilots.
BlockTrace simulate_cab(const SystemConfig& cfg, int training_symbols,
                        RandomStream& rng,
                        IniModel ini = IniModel::deterministic);

/// One block of half-duplex training: the downlink is silent while training.
BlockTrace simulate_hd(const SystemConfig& cfg, int training_symbols,
                       RandomStream& rng);

/// `blocks` independent blocks; block i draws from stream (cfg.seed, i), so
/// the output does not depend on options.threads.
std::vector<BlockTrace> simulate_ensemble(const SystemConfig& cfg,
                                          Strategy strategy,
                                          int training_symbols, int blocks,
                                          const SimulationOptions& options = {});

std::vector<CycleRates> simulate_cycle_ensemble(
    const SystemConfig& cfg, int max_cycles, int blocks,
    const SimulationOptions& options = {});

/// Time-weighted efficiency of one block:
/// ((T - T_tr) data + sum_c (own_c + (M-1) other_c)) / T.
double trace_efficiency(const BlockTrace& trace, const SystemConfig& cfg,
                        int training_symbols);

/// Mean and standard error of trace_efficiency across blocks.
Estimate ergodic_efficiency(std::span<const BlockTrace> traces,
                            const SystemConfig& cfg, int training_symbols);

/// Ensemble-mean rate profile for the simulated objective.
RateProfile simulated_profile(std::span<const CycleRates> ensemble);

/// Simulated-mode profile long enough for the brute-force grid, using
/// cfg.trials blocks.
RateProfile simulated_profile(const SystemConfig& cfg,
                              const SimulationOptions& options = {});

/// CSV trace dump: block_id,cycle,rate_noini,rate_ini,data_rate.
void write_trace_csv(std::ostream& out, std::span<const BlockTrace> traces);

}  // namespace fdmimo
