#pragma once

#include <vector>

#include "fdmimo/config.hpp"
#include "fdmimo/random.hpp"
#include "fdmimo/stats.hpp"

namespace fdmimo {

// All rates are per user, in nats per channel use.

/// e^x E1(x) for x > 0.
double scaled_exp_integral(double x);

/// Genie-aided ZF rate E[ln(1 + g P/M)], g ~ Exp(1): e^{M/P} E1(M/P).
double genie_rate(int users, double power);
double genie_rate(const SystemConfig& cfg);

/// Monte Carlo estimate of the genie-aided ZF rate: samples perfect-CSI ZF
/// on fresh channels and averages ln(1 + |h_k v_k|^2 P/M) over users.
Estimate genie_rate_monte_carlo(const SystemConfig& cfg, int trials,
                                RandomStream& rng);

/// Data-phase rate-loss bound after `training_symbols` uplink pilots:
/// ln(1 + (P/M)(M-1) / (1 + T_tr f P / M)).
double data_loss_bound(double training_symbols, const SystemConfig& cfg);

/// Training-phase rate-loss bound with INI after `pilot_cycles` cycles.
double ini_loss_bound(double pilot_cycles, const SystemConfig& cfg);

/// The limit of ini_loss_bound as pilot cycles grow without bound.
double invariant_ini_loss(const SystemConfig& cfg);

/// Closed-form ingredients of one scenario.
struct RateBreakdown {
  SystemConfig cfg;
  double genie = 0.0;          ///< closed-form genie-aided rate
  double invariant_ini = 0.0;  ///< invariant_ini_loss(cfg)

  double data_loss(double training_symbols) const {
    return data_loss_bound(training_symbols, cfg);
  }
  double ini_loss(double pilot_cycles) const {
    return ini_loss_bound(pilot_cycles, cfg);
  }
};

RateBreakdown make_breakdown(const SystemConfig& cfg);

/// Per-symbol rates indexed by the number of pilot cycles the active
/// precoder was built from. `no_ini[b]` applies to a user's own pilot
/// symbol and to the data phase; `with_ini[b]` to the other users' pilot
/// symbols. Index 0 is unused (cycle 1 carries no downlink data).
struct RateProfile {
  double genie = 0.0;
  std::vector<double> no_ini;
  std::vector<double> with_ini;

  int max_cycles() const { return static_cast<int>(no_ini.size()) - 1; }
};

/// Bound-based profile: genie minus loss bound, floored at zero.
RateProfile analytic_profile(const RateBreakdown& rb, int max_cycles);

/// Sum over training cycles j = 2..T_tr/M of the per-cycle rate mass
/// R_noINI((j-1)M) + (M-1) R_INI((j-1)M).
double training_phase_sum(const RateProfile& profile, int users,
                          int training_symbols);

/// Full-duplex (CAB) spectral efficiency with `training_symbols` pilots.
/// Requires a multiple of M with M <= T_cab < T.
double ar_cab(int training_symbols, const SystemConfig& cfg,
              const RateProfile& profile);
double ar_cab(int training_symbols, const SystemConfig& cfg,
              const RateBreakdown& rb);

/// Half-duplex spectral efficiency; training symbols carry no data.
double ar_hd(int training_symbols, const SystemConfig& cfg,
             const RateProfile& profile);
double ar_hd(int training_symbols, const SystemConfig& cfg,
             const RateBreakdown& rb);

/// Efficiencies at every grid point T_tr = b M, b = 1..T/M-1, computed with
/// running sums. Element b-1 corresponds to b cycles.
std::vector<double> ar_cab_curve(const SystemConfig& cfg,
                                 const RateProfile& profile);
std::vector<double> ar_hd_curve(const SystemConfig& cfg,
                                const RateProfile& profile);

/// Number of whole cycles on the brute-force grid, (T - M) / M rounded down.
int max_training_cycles(const SystemConfig& cfg);

}  // namespace fdmimo
