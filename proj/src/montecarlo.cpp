#include "fdmimo/montecarlo.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "fdmimo/channel.hpp"
#include "fdmimo/parallel.hpp"
#include "fdmimo/precoding.hpp"

namespace fdmimo {

namespace {

struct SymbolRates {
  double no_ini = 0.0;
  double with_ini = 0.0;
};

SymbolRates user_average_rates(const ChannelBlock& block, const Precoder& zf,
                               const SystemConfig& cfg, IniModel ini) {
  const LinkPowers lp = link_powers(block, zf, cfg);
  const int m = cfg.users;
  SymbolRates r;
  for (int k = 0; k < m; ++k) {
    const double noise = 1.0 + lp.ibi(k);
    r.no_ini += std::log1p(lp.signal(k) / noise);
    if (ini == IniModel::deterministic) {
      r.with_ini += std::log1p(lp.signal(k) / (noise + cfg.ini_power()));
    } else {
      // Average over the M-1 symbols in which user i != k sends its pilot.
      double acc = 0.0;
      for (int i = 0; i < m; ++i) {
        if (i == k) continue;
        const double interference =
            cfg.ini_power() * std::norm(block.user_to_user(k, i));
        acc += std::log1p(lp.signal(k) / (noise + interference));
      }
      r.with_ini += acc / (m - 1);
    }
  }
  r.no_ini /= m;
  r.with_ini /= m;
  return r;
}

void check_training(int training_symbols, const SystemConfig& cfg,
                    int min_cycles) {
  if (training_symbols % cfg.users != 0 ||
      training_symbols < min_cycles * cfg.users ||
      training_symbols >= cfg.block_length)
    throw std::invalid_argument("invalid training length " +
                                std::to_string(training_symbols));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

CycleRates simulate_cycle_rates(const SystemConfig& cfg, int max_cycles,
                                RandomStream& rng, IniModel ini) {
  if (max_cycles < 1) throw std::invalid_argument("max_cycles must be >= 1");
  const double pilot_power = cfg.pilot_power();
  for (;;) {
    const ChannelBlock block = sample_block(cfg, rng);
    try {
      CycleRates out;
      out.genie =
          user_average_rates(block, zero_forcing(block.downlink), cfg, ini)
              .no_ini;
      out.no_ini.assign(static_cast<std::size_t>(max_cycles) + 1, 0.0);
      out.with_ini.assign(static_cast<std::size_t>(max_cycles) + 1, 0.0);
      PilotAccumulator pilots(block.downlink, pilot_power);
      for (int b = 1; b <= max_cycles; ++b) {
        pilots.add_cycle(rng);
        const SymbolRates r =
            user_average_rates(block, zero_forcing(pilots.estimate()), cfg, ini);
        out.no_ini[b] = r.no_ini;
        out.with_ini[b] = r.with_ini;
      }
      return out;
    } catch (const SingularEstimateError&) {
      // Resample: the next loop iteration draws a fresh block.
    }
  }
}

BlockTrace simulate_cab(const SystemConfig& cfg, int training_symbols,
                        RandomStream& rng, IniModel ini) {
  check_training(training_symbols, cfg, 2);
  const int cycles = training_symbols / cfg.users;
  const CycleRates rates = simulate_cycle_rates(cfg, cycles, rng, ini);
  BlockTrace trace;
  trace.genie_rate = rates.genie;
  trace.data_rate = rates.no_ini[cycles];
  // Cycle j runs on the estimate built from j-1 cycles.
  for (int j = 2; j <= cycles; ++j) {
    trace.own_pilot.push_back(rates.no_ini[j - 1]);
    trace.other_pilot.push_back(rates.with_ini[j - 1]);
  }
  return trace;
}

BlockTrace simulate_hd(const SystemConfig& cfg, int training_symbols,
                       RandomStream& rng) {
  check_training(training_symbols, cfg, 1);
  const int cycles = training_symbols / cfg.users;
  const CycleRates rates = simulate_cycle_rates(cfg, cycles, rng);
  BlockTrace trace;
  trace.genie_rate = rates.genie;
  trace.data_rate = rates.no_ini[cycles];
  trace.own_pilot.assign(static_cast<std::size_t>(cycles - 1), 0.0);
  trace.other_pilot.assign(static_cast<std::size_t>(cycles - 1), 0.0);
  return trace;
}

std::vector<BlockTrace> simulate_ensemble(const SystemConfig& cfg,
                                          Strategy strategy,
                                          int training_symbols, int blocks,
                                          const SimulationOptions& options) {
  std::vector<BlockTrace> traces(static_cast<std::size_t>(blocks));
  parallel_for(traces.size(), options.threads, [&](std::size_t i) {
    RandomStream rng(cfg.seed, i);
    traces[i] = strategy == Strategy::cab
                    ? simulate_cab(cfg, training_symbols, rng, options.ini)
                    : simulate_hd(cfg, training_symbols, rng);
  });
  return traces;
}

std::vector<CycleRates> simulate_cycle_ensemble(const SystemConfig& cfg,
                                                int max_cycles, int blocks,
                                                const SimulationOptions& options) {
  std::vector<CycleRates> out(static_cast<std::size_t>(blocks));
  parallel_for(out.size(), options.threads, [&](std::size_t i) {
    RandomStream rng(cfg.seed, i);
    out[i] = simulate_cycle_rates(cfg, max_cycles, rng, options.ini);
  });
  return out;
}

double trace_efficiency(const BlockTrace& trace, const SystemConfig& cfg,
                        int training_symbols) {
  const double T = cfg.block_length;
  double training = 0.0;
  for (std::size_t c = 0; c < trace.own_pilot.size(); ++c)
    training += trace.own_pilot[c] + (cfg.users - 1) * trace.other_pilot[c];
  return ((T - training_symbols) * trace.data_rate + training) / T;
}

Estimate ergodic_efficiency(std::span<const BlockTrace> traces,
                            const SystemConfig& cfg, int training_symbols) {
  if (traces.size() < 2)
    throw std::invalid_argument("ergodic efficiency needs at least two traces");
  std::vector<double> per_block(traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i)
    per_block[i] = trace_efficiency(traces[i], cfg, training_symbols);
  return mean_and_error(per_block);
}

RateProfile simulated_profile(std::span<const CycleRates> ensemble) {
  if (ensemble.empty()) throw std::invalid_argument("empty ensemble");
  const std::size_t len = ensemble.front().no_ini.size();
  const std::size_t n = ensemble.size();
  RateProfile p;
  p.no_ini.assign(len, 0.0);
  p.with_ini.assign(len, 0.0);
  std::vector<double> column(n);
  for (std::size_t i = 0; i < n; ++i) column[i] = ensemble[i].genie;
  p.genie = pairwise_sum(column) / n;
  for (std::size_t b = 1; b < len; ++b) {
    for (std::size_t i = 0; i < n; ++i) column[i] = ensemble[i].no_ini[b];
    p.no_ini[b] = pairwise_sum(column) / n;
    for (std::size_t i = 0; i < n; ++i) column[i] = ensemble[i].with_ini[b];
    p.with_ini[b] = pairwise_sum(column) / n;
  }
  return p;
}

RateProfile simulated_profile(const SystemConfig& cfg,
                              const SimulationOptions& options) {
  const auto ensemble =
      simulate_cycle_ensemble(cfg, max_training_cycles(cfg), cfg.trials, options);
  return simulated_profile(ensemble);
}

void write_trace_csv(std::ostream& out, std::span<const BlockTrace> traces) {
  out << "block_id,cycle,rate_noini,rate_ini,data_rate\n";
  for (std::size_t b = 0; b < traces.size(); ++b) {
    const auto& t = traces[b];
    for (std::size_t c = 0; c < t.own_pilot.size(); ++c)
      out << b << ',' << c + 2 << ',' << format_double(t.own_pilot[c]) << ','
          << format_double(t.other_pilot[c]) << ','
          << format_double(t.data_rate) << '\n';
  }
}

}  // namespace fdmimo
