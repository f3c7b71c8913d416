#pragma once

#include "fdmimo/config.hpp"
#include "fdmimo/rates.hpp"

namespace fdmimo {

enum class Strategy { cab, half_duplex };

const char* to_string(Strategy s);

/// Closed-form optimal training length: (sqrt(4cT+1) - 1) / (2c) and its
/// large-T form sqrt(T/c).
struct ClosedForm {
  double value = 0.0;
  double simplified = 0.0;
};

/// Full-duplex training length with c = f * invariant INI loss / M.
/// Without INI (c = 0) training should span the whole block: T - M.
ClosedForm t_cab_approx(const SystemConfig& cfg, const RateBreakdown& rb);

/// Half-duplex training length with c = f * genie rate / (M - 1).
ClosedForm t_hd_approx(const SystemConfig& cfg, const RateBreakdown& rb);

/// Nearest multiple of M, clamped to the search grid [M, T - M].
int round_to_cycle(double symbols, const SystemConfig& cfg);

struct TrainingPlan {
  Strategy strategy = Strategy::cab;
  int t_star_exact = 0;         ///< grid argmax (ties to the shorter length)
  double t_star_approx = 0.0;   ///< closed form before rounding
  int t_star_rounded = 0;       ///< round_to_cycle(t_star_approx)
  double ar_at_exact = 0.0;
  double ar_at_approx = 0.0;
};

/// Exhaustive search over every multiple of M in [M, T - M] against the
/// given rate profile (analytic or simulated).
TrainingPlan brute_force_optimum(const SystemConfig& cfg, Strategy strategy,
                                 const RateProfile& profile,
                                 const RateBreakdown& rb);

/// Analytic-mode convenience overload.
TrainingPlan brute_force_optimum(const SystemConfig& cfg, Strategy strategy);

/// Asymptotic loss of optimal CAB against the genie system,
/// 2 sqrt(M dR_inv / (f T)), without the o(1/sqrt T) remainder.
double loss_bound_cab(const SystemConfig& cfg, const RateBreakdown& rb);

/// Head-cycle remainder 2M R_zf / T that accompanies loss_bound_cab in
/// finite-T checks.
double loss_bound_cab_slack(const SystemConfig& cfg, const RateBreakdown& rb);

/// 2 sqrt((M - 1) R_zf / (f T)).
double loss_bound_hd(const SystemConfig& cfg, const RateBreakdown& rb);

/// (t/T)(R_zf - dR_inv) minus the explicit remainder
/// (2M/T) R_zf + (t/T)((M-1)/(M f)) ln(t-1)/(t-2).
double gain_lower_bound(const SystemConfig& cfg, const RateBreakdown& rb,
                        int training_symbols);

/// Rigorous finite-T bound on R_zf - AR_CAB(t) for any grid point t = bM:
///   (t/T) dR_inv + (M-1)/(f t) + (M/T) R_zf + ((M-1)/(f T)) H_{b-1},
/// with H_n the n-th harmonic number. Its first two terms reduce to
/// loss_bound_cab at the closed-form t.
double loss_bound_cab_finite(const SystemConfig& cfg, const RateBreakdown& rb,
                             int training_symbols);

/// Rigorous finite-T lower bound on AR_CAB(t) - AR_HD(t), t = BM:
///   ((B - 1)/T)(M R_zf - (M - 1) dR_inv) - (M/T) sum_{b=1}^{B-1} ln(1 + x_b),
/// x_b = (P/M)(M-1)/(1 + b f P) the IBI power after b cycles.
double gain_lower_bound_finite(const SystemConfig& cfg, const RateBreakdown& rb,
                               int training_symbols);

}  // namespace fdmimo
