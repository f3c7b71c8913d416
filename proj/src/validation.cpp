#include "fdmimo/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "fdmimo/channel.hpp"
#include "fdmimo/optimizer.hpp"
#include "fdmimo/parallel.hpp"
#include "fdmimo/precoding.hpp"
#include "fdmimo/rates.hpp"

namespace fdmimo {

namespace {

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

Check make_check(std::string name, double margin, std::string detail,
                 bool gating = true) {
  return {std::move(name), margin >= 0.0, gating, margin, std::move(detail)};
}

// Empirical per-entry MMSE error variance over `trials` fresh blocks.
Estimate estimator_error(const SystemConfig& cfg, int cycles, int trials,
                         std::uint64_t stream_base) {
  std::vector<double> per_trial(static_cast<std::size_t>(trials));
  for (int i = 0; i < trials; ++i) {
    RandomStream rng(cfg.seed, stream_base + static_cast<std::uint64_t>(i));
    const ChannelBlock block = sample_block(cfg, rng);
    const ChannelEstimate est = mmse_update(block, cycles, cfg, rng);
    per_trial[i] = (block.downlink - est.estimate).cwiseAbs2().mean();
  }
  return mean_and_error(per_trial);
}

}  // namespace

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.passed || !c.gating; });
}

void ValidationReport::print(std::ostream& out) const {
  for (const auto& c : checks) {
    const char* tag = c.passed ? "PASS" : (c.gating ? "FAIL" : "INFO");
    char margin[64];
    std::snprintf(margin, sizeof margin, "%+.4g", c.margin);
    out << '[' << tag << "] " << c.name << "  margin=" << margin << "  "
        << c.detail << '\n';
  }
  out << (passed() ? "validation passed" : "validation FAILED") << '\n';
}

ValidationReport validate_all(const SystemConfig& input,
                              const SimulationOptions& options) {
  const SystemConfig cfg = validate(input);
  const RateBreakdown rb = make_breakdown(cfg);
  const int m = cfg.users;
  ValidationReport report;
  auto& checks = report.checks;

  // Estimator law.
  const int est_trials = std::min(cfg.trials, 10000);
  for (int cycles : {1, 5, 20}) {
    const Estimate e = estimator_error(cfg, cycles, est_trials,
                                       1000000ull * cycles);
    const double expected = mmse_error_variance(cycles, cfg.pilot_power());
    checks.push_back(make_check(
        "mmse error variance, beta=" + std::to_string(cycles),
        3.0 * e.std_error - std::abs(e.mean - expected),
        fmt("empirical %.6g vs %.6g (se %.2g)", e.mean, expected, e.std_error)));
  }

  // ZF post-conditions on random estimates.
  {
    double worst_leak = 0.0;
    double worst_norm = 0.0;
    for (int i = 0; i < 1000; ++i) {
      RandomStream rng(cfg.seed, 50000000ull + i);
      const ChannelBlock block = sample_block(cfg, rng);
      const ChannelEstimate est = mmse_update(block, 1 + i % 20, cfg, rng);
      Precoder zf;
      try {
        zf = zero_forcing(est);
      } catch (const SingularEstimateError&) {
        continue;
      }
      const CMatrix product = est.estimate * zf.beams;
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
          if (r != c) worst_leak = std::max(worst_leak, std::abs(product(r, c)));
      for (int c = 0; c < m; ++c)
        worst_norm = std::max(worst_norm, std::abs(zf.beams.col(c).norm() - 1.0));
    }
    checks.push_back(make_check("zf nulls other users' estimates",
                                1e-8 - worst_leak,
                                fmt("max |h_i v_j| = %.3g", worst_leak)));
    checks.push_back(make_check("zf beams unit norm", 1e-10 - worst_norm,
                                fmt("max | |v| - 1 | = %.3g", worst_norm)));
  }

  // Bound directions against Monte Carlo, beta = 1..10.
  constexpr int kCycles = 10;
  const auto ensemble =
      simulate_cycle_ensemble(cfg, kCycles, cfg.trials, options);
  {
    std::vector<double> genie(ensemble.size());
    for (std::size_t i = 0; i < ensemble.size(); ++i) genie[i] = ensemble[i].genie;
    const Estimate g = mean_and_error(genie);
    checks.push_back(make_check(
        "genie rate Monte Carlo vs closed form",
        3.0 * g.std_error - std::abs(g.mean - rb.genie),
        fmt("MC %.6g vs %.6g (se %.2g)", g.mean, rb.genie, g.std_error)));

    double ini_margin = INFINITY;
    double data_margin = INFINITY;
    std::vector<double> loss(ensemble.size());
    for (int b = 1; b <= kCycles; ++b) {
      for (std::size_t i = 0; i < ensemble.size(); ++i)
        loss[i] = ensemble[i].genie - ensemble[i].with_ini[b];
      const Estimate li = mean_and_error(loss);
      ini_margin = std::min(ini_margin,
                            rb.ini_loss(b) + 3.0 * li.std_error - li.mean);
      for (std::size_t i = 0; i < ensemble.size(); ++i)
        loss[i] = ensemble[i].genie - ensemble[i].no_ini[b];
      const Estimate ld = mean_and_error(loss);
      data_margin = std::min(
          data_margin, rb.data_loss(b * m) + 3.0 * ld.std_error - ld.mean);
    }
    checks.push_back(make_check("training loss with INI <= bound, beta=1..10",
                                ini_margin, "worst margin over beta"));
    checks.push_back(make_check("data-phase loss <= bound, beta=1..10",
                                data_margin, "worst margin over beta"));
  }

  // Optimizers, analytic mode.
  const RateProfile profile = analytic_profile(rb, max_training_cycles(cfg));
  const TrainingPlan cab = brute_force_optimum(cfg, Strategy::cab, profile, rb);
  const TrainingPlan hd =
      brute_force_optimum(cfg, Strategy::half_duplex, profile, rb);
  for (const TrainingPlan* plan : {&cab, &hd}) {
    const std::string tag = to_string(plan->strategy);
    const double rel =
        std::abs(plan->t_star_rounded - plan->t_star_exact) /
        static_cast<double>(plan->t_star_exact);
    checks.push_back(make_check(
        tag + " closed-form length within 15% of grid optimum", 0.15 - rel,
        fmt("approx %.0f vs exact %.0f", plan->t_star_rounded,
            plan->t_star_exact)));
    const double shortfall =
        (plan->ar_at_exact - plan->ar_at_approx) / plan->ar_at_exact;
    checks.push_back(make_check(
        tag + " closed-form efficiency within 1% of optimum", 0.01 - shortfall,
        fmt("shortfall %.3g", shortfall)));
  }
  {
    const auto curve = ar_cab_curve(cfg, profile);
    const std::size_t i = cab.t_star_exact / m - 1;
    double fwd = i + 1 < curve.size() ? curve[i + 1] - curve[i] : 0.0;
    double bwd = i > 0 ? curve[i] - curve[i - 1] : 0.0;
    checks.push_back(make_check("cab marginal utility balances at optimum",
                                std::min(-fwd, bwd),
                                fmt("forward %.3g, backward %.3g", fwd, bwd)));
  }
  checks.push_back(make_check(
      "genie >= optimal cab >= optimal hd >= 0",
      std::min({rb.genie - cab.ar_at_exact, cab.ar_at_exact - hd.ar_at_exact,
                hd.ar_at_exact}),
      fmt("%.5g >= %.5g >= %.5g", rb.genie, cab.ar_at_exact, hd.ar_at_exact)));

  // Loss bounds against the genie system.
  {
    const double loss_hd = rb.genie - hd.ar_at_exact;
    const double bound_hd = loss_bound_hd(cfg, rb);
    checks.push_back(make_check("hd loss <= 2 sqrt((M-1) R_zf / (f T))",
                                bound_hd - loss_hd,
                                fmt("loss %.5g, bound %.5g", loss_hd, bound_hd)));

    const double loss_cab = rb.genie - cab.ar_at_exact;
    const double finite = loss_bound_cab_finite(cfg, rb, cab.t_star_rounded);
    checks.push_back(make_check(
        "cab loss <= explicit finite-T bound", finite - loss_cab,
        fmt("loss %.5g, bound %.5g at t=%.0f", loss_cab, finite,
            cab.t_star_rounded)));
    const double asymptotic =
        loss_bound_cab(cfg, rb) + loss_bound_cab_slack(cfg, rb);
    checks.push_back(make_check(
        "cab loss <= 2 sqrt(M dR_inv / (f T)) + 2M R_zf / T",
        asymptotic - loss_cab,
        fmt("loss %.5g, bound %.5g", loss_cab, asymptotic), false));
  }

  // Full-duplex gain at the half-duplex closed-form length.
  {
    const int t_tr = round_to_cycle(hd.t_star_approx, cfg);
    const double gain = ar_cab(t_tr, cfg, profile) - ar_hd(t_tr, cfg, profile);
    const double finite = gain_lower_bound_finite(cfg, rb, t_tr);
    checks.push_back(make_check(
        "cab - hd gain >= explicit finite-T lower bound", gain - finite,
        fmt("gain %.5g, bound %.5g at t=%.0f", gain, finite, t_tr)));
    if (t_tr >= 2 * m) {
      const double lb = gain_lower_bound(cfg, rb, t_tr);
      checks.push_back(make_check(
          "cab - hd gain >= (t/T)(R_zf - dR_inv) - remainder", gain - lb,
          fmt("gain %.5g, bound %.5g", gain, lb), false));
    }
  }
  return report;
}

}  // namespace fdmimo
