#include "fdmimo/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fdmimo/channel.hpp"
#include "fdmimo/precoding.hpp"

namespace fdmimo {

double scaled_exp_integral(double x) {
  if (!(x > 0.0)) throw std::domain_error("E1 requires x > 0");
  if (x <= 1.0) return std::exp(x) * -std::expint(-x);
  // Continued fraction for e^x E1(x), modified Lentz.
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("E1 continued fraction did not converge");
}

double genie_rate(int users, double power) {
  if (!(power > 0.0)) return 0.0;
  return scaled_exp_integral(static_cast<double>(users) / power);
}

double genie_rate(const SystemConfig& cfg) {
  return genie_rate(cfg.users, cfg.power);
}

Estimate genie_rate_monte_carlo(const SystemConfig& cfg, int trials,
                                RandomStream& rng) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(trials));
  while (static_cast<int>(samples.size()) < trials) {
    const ChannelBlock block = sample_block(cfg, rng);
    Precoder zf;
    try {
      zf = zero_forcing(block.downlink);
    } catch (const SingularEstimateError&) {
      continue;
    }
    const LinkPowers lp = link_powers(block, zf, cfg);
    double rate = 0.0;
    for (Eigen::Index k = 0; k < lp.signal.size(); ++k)
      rate += std::log1p(lp.signal(k) / (1.0 + lp.ibi(k)));
    samples.push_back(rate / static_cast<double>(cfg.users));
  }
  return mean_and_error(samples);
}

double data_loss_bound(double training_symbols, const SystemConfig& cfg) {
  const double m = cfg.users;
  const double ibi = cfg.stream_power() * (m - 1.0) /
                     (1.0 + training_symbols * cfg.pilot_power() / m);
  return std::log1p(ibi);
}

double ini_loss_bound(double pilot_cycles, const SystemConfig& cfg) {
  const double m = cfg.users;
  const double ibi =
      cfg.stream_power() * (m - 1.0) / (1.0 + pilot_cycles * cfg.pilot_power());
  const double ini = cfg.ini_power();
  return std::log(1.0 + ibi + ini) -
         std::log1p(ini / (1.0 + cfg.stream_power()));
}

double invariant_ini_loss(const SystemConfig& cfg) {
  const double ini = cfg.ini_power();
  return std::log1p(ini) - std::log1p(ini / (1.0 + cfg.stream_power()));
}

RateBreakdown make_breakdown(const SystemConfig& cfg) {
  return {cfg, genie_rate(cfg), invariant_ini_loss(cfg)};
}

RateProfile analytic_profile(const RateBreakdown& rb, int max_cycles) {
  RateProfile p;
  p.genie = rb.genie;
  p.no_ini.assign(static_cast<std::size_t>(max_cycles) + 1, 0.0);
  p.with_ini.assign(static_cast<std::size_t>(max_cycles) + 1, 0.0);
  const double m = rb.cfg.users;
  for (int b = 1; b <= max_cycles; ++b) {
    p.no_ini[b] = std::max(rb.genie - rb.data_loss(b * m), 0.0);
    p.with_ini[b] = std::max(rb.genie - rb.ini_loss(b), 0.0);
  }
  return p;
}

int max_training_cycles(const SystemConfig& cfg) {
  return (cfg.block_length - cfg.users) / cfg.users;
}

namespace {

void check_training(int training_symbols, const SystemConfig& cfg,
                    const RateProfile& profile) {
  if (training_symbols < cfg.users || training_symbols % cfg.users != 0 ||
      training_symbols >= cfg.block_length)
    throw std::invalid_argument(
        "training symbols must be a multiple of M in [M, T): got " +
        std::to_string(training_symbols));
  if (training_symbols / cfg.users > profile.max_cycles())
    throw std::invalid_argument("rate profile too short for " +
                                std::to_string(training_symbols) +
                                " training symbols");
}

}  // namespace

double training_phase_sum(const RateProfile& profile, int users,
                          int training_symbols) {
  double sum = 0.0;
  for (int j = 2; j <= training_symbols / users; ++j) {
    const int held = j - 1;
    sum += profile.no_ini[held] + (users - 1) * profile.with_ini[held];
  }
  return sum;
}

double ar_cab(int training_symbols, const SystemConfig& cfg,
              const RateProfile& profile) {
  check_training(training_symbols, cfg, profile);
  const double t = cfg.block_length;
  const double data = profile.no_ini[training_symbols / cfg.users];
  return ((t - training_symbols) * data +
          training_phase_sum(profile, cfg.users, training_symbols)) /
         t;
}

double ar_cab(int training_symbols, const SystemConfig& cfg,
              const RateBreakdown& rb) {
  return ar_cab(training_symbols, cfg,
                analytic_profile(rb, training_symbols / cfg.users));
}

double ar_hd(int training_symbols, const SystemConfig& cfg,
             const RateProfile& profile) {
  check_training(training_symbols, cfg, profile);
  const double t = cfg.block_length;
  return (t - training_symbols) / t *
         profile.no_ini[training_symbols / cfg.users];
}

double ar_hd(int training_symbols, const SystemConfig& cfg,
             const RateBreakdown& rb) {
  return ar_hd(training_symbols, cfg,
               analytic_profile(rb, training_symbols / cfg.users));
}

std::vector<double> ar_cab_curve(const SystemConfig& cfg,
                                 const RateProfile& profile) {
  const int cycles = max_training_cycles(cfg);
  if (cycles > profile.max_cycles())
    throw std::invalid_argument("rate profile shorter than the search grid");
  const double t = cfg.block_length;
  const int m = cfg.users;
  std::vector<double> curve(static_cast<std::size_t>(cycles));
  double running = 0.0;
  for (int b = 1; b <= cycles; ++b) {
    if (b >= 2) running += profile.no_ini[b - 1] + (m - 1) * profile.with_ini[b - 1];
    curve[b - 1] = ((t - b * m) * profile.no_ini[b] + running) / t;
  }
  return curve;
}

std::vector<double> ar_hd_curve(const SystemConfig& cfg,
                                const RateProfile& profile) {
  const int cycles = max_training_cycles(cfg);
  if (cycles > profile.max_cycles())
    throw std::invalid_argument("rate profile shorter than the search grid");
  const double t = cfg.block_length;
  std::vector<double> curve(static_cast<std::size_t>(cycles));
  for (int b = 1; b <= cycles; ++b)
    curve[b - 1] = (t - b * cfg.users) / t * profile.no_ini[b];
  return curve;
}

}  // namespace fdmimo
