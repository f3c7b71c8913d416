#include "fdmimo/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fdmimo {

const char* to_string(Strategy s) {
  return s == Strategy::cab ? "cab" : "hd";
}

namespace {

ClosedForm closed_form(double c, double block_length) {
  return {(std::sqrt(4.0 * c * block_length + 1.0) - 1.0) / (2.0 * c),
          std::sqrt(block_length / c)};
}

double harmonic(int n) {
  double h = 0.0;
  for (int k = n; k >= 1; --k) h += 1.0 / k;
  return h;
}

void check_grid_point(int training_symbols, const SystemConfig& cfg,
                      int min_cycles) {
  if (training_symbols % cfg.users != 0 ||
      training_symbols < min_cycles * cfg.users ||
      training_symbols >= cfg.block_length)
    throw std::invalid_argument("training length " +
                                std::to_string(training_symbols) +
                                " is not a valid cycle multiple");
}

}  // namespace

ClosedForm t_cab_approx(const SystemConfig& cfg, const RateBreakdown& rb) {
  const double c = cfg.feedback_fraction * rb.invariant_ini / cfg.users;
  if (!(c > 0.0)) {
    const double whole = cfg.block_length - cfg.users;
    return {whole, whole};
  }
  return closed_form(c, cfg.block_length);
}

ClosedForm t_hd_approx(const SystemConfig& cfg, const RateBreakdown& rb) {
  if (!(rb.genie > 0.0))
    throw std::domain_error("half-duplex closed form needs a positive genie rate");
  const double c = cfg.feedback_fraction * rb.genie / (cfg.users - 1);
  return closed_form(c, cfg.block_length);
}

int round_to_cycle(double symbols, const SystemConfig& cfg) {
  const int top = max_training_cycles(cfg);
  const auto cycles = static_cast<long long>(std::llround(symbols / cfg.users));
  return static_cast<int>(std::clamp<long long>(cycles, 1, top)) * cfg.users;
}

TrainingPlan brute_force_optimum(const SystemConfig& cfg, Strategy strategy,
                                 const RateProfile& profile,
                                 const RateBreakdown& rb) {
  const std::vector<double> curve = strategy == Strategy::cab
                                        ? ar_cab_curve(cfg, profile)
                                        : ar_hd_curve(cfg, profile);
  if (curve.empty()) throw std::invalid_argument("empty training grid");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    if (curve[i] > curve[best]) best = i;

  TrainingPlan plan;
  plan.strategy = strategy;
  plan.t_star_exact = static_cast<int>(best + 1) * cfg.users;
  plan.ar_at_exact = curve[best];
  plan.t_star_approx = strategy == Strategy::cab ? t_cab_approx(cfg, rb).value
                                                 : t_hd_approx(cfg, rb).value;
  plan.t_star_rounded = round_to_cycle(plan.t_star_approx, cfg);
  plan.ar_at_approx = curve[plan.t_star_rounded / cfg.users - 1];
  return plan;
}

TrainingPlan brute_force_optimum(const SystemConfig& cfg, Strategy strategy) {
  const RateBreakdown rb = make_breakdown(cfg);
  return brute_force_optimum(
      cfg, strategy, analytic_profile(rb, max_training_cycles(cfg)), rb);
}

double loss_bound_cab(const SystemConfig& cfg, const RateBreakdown& rb) {
  return 2.0 * std::sqrt(cfg.users * rb.invariant_ini /
                         (cfg.feedback_fraction * cfg.block_length));
}

double loss_bound_cab_slack(const SystemConfig& cfg, const RateBreakdown& rb) {
  return 2.0 * cfg.users * rb.genie / cfg.block_length;
}

double loss_bound_hd(const SystemConfig& cfg, const RateBreakdown& rb) {
  return 2.0 * std::sqrt((cfg.users - 1) * rb.genie /
                         (cfg.feedback_fraction * cfg.block_length));
}

double gain_lower_bound(const SystemConfig& cfg, const RateBreakdown& rb,
                        int training_symbols) {
  check_grid_point(training_symbols, cfg, 2);
  const double t = training_symbols;
  const double T = cfg.block_length;
  const double m = cfg.users;
  const double slack =
      2.0 * m / T * rb.genie +
      t / T * ((m - 1.0) / (m * cfg.feedback_fraction)) * std::log(t - 1.0) /
          (t - 2.0);
  return t / T * (rb.genie - rb.invariant_ini) - slack;
}

double loss_bound_cab_finite(const SystemConfig& cfg, const RateBreakdown& rb,
                             int training_symbols) {
  check_grid_point(training_symbols, cfg, 1);
  const double t = training_symbols;
  const double T = cfg.block_length;
  const double m = cfg.users;
  const double f = cfg.feedback_fraction;
  const int cycles = training_symbols / cfg.users;
  return t / T * rb.invariant_ini + (m - 1.0) / (f * t) + m / T * rb.genie +
         (m - 1.0) / (f * T) * harmonic(cycles - 1);
}

double gain_lower_bound_finite(const SystemConfig& cfg, const RateBreakdown& rb,
                               int training_symbols) {
  check_grid_point(training_symbols, cfg, 1);
  const double T = cfg.block_length;
  const double m = cfg.users;
  const int cycles = training_symbols / cfg.users;
  double ibi_mass = 0.0;
  for (int b = 1; b < cycles; ++b)
    ibi_mass += std::log1p(cfg.stream_power() * (m - 1.0) /
                           (1.0 + b * cfg.pilot_power()));
  return (cycles - 1) / T * (m * rb.genie - (m - 1.0) * rb.invariant_ini) -
         m / T * ibi_mass;
}

}  // namespace fdmimo
