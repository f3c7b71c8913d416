#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fdmimo/config.hpp"
#include "fdmimo/montecarlo.hpp"

namespace fdmimo {

enum class Mode { analytic, simulated };

const char* to_string(Mode m);
Mode parse_mode(const std::string& text);

/// One evaluated operating point. Training lengths are in symbols; rates in
/// nats per channel use.
struct SweepRow {
  std::string swept;       ///< name of the swept variable ("T", "snr_db", ...)
  double swept_value = 0.0;
  SystemConfig cfg;
  Mode mode = Mode::analytic;

  int t_cab_exact = 0;
  double t_cab_approx = 0.0;
  int t_hd_exact = 0;
  double t_hd_approx = 0.0;

  double ar_genie = 0.0;
  double ar_cab_opt = 0.0;
  double ar_hd_opt = 0.0;
  double ar_cab_at_hd = 0.0;       ///< CAB run with the half-duplex optimum length
  double gain_pct = 0.0;           ///< 100 (ar_cab_opt - ar_hd_opt) / ar_hd_opt
  double gain_pct_cab_at_hd = 0.0;

  double loss_bound_cab = 0.0;
  double loss_bound_hd = 0.0;
  double gain_lower_bound = 0.0;   ///< at round_to_cycle(t_hd_approx)

  std::string error;               ///< non-empty when the point failed
};

struct SweepOptions {
  Mode mode = Mode::analytic;
  SimulationOptions simulation;
};

/// Evaluates every formula and both optimizers at one configuration.
SweepRow evaluate_point(const SystemConfig& cfg, const SweepOptions& options);

std::vector<SweepRow> sweep_block_length(const SystemConfig& base,
                                         std::span<const double> block_lengths,
                                         const SweepOptions& options = {});

std::vector<SweepRow> sweep_snr(const SystemConfig& base,
                                std::span<const double> snr_db,
                                const SweepOptions& options = {});

/// Grid syntax: comma list "500,1000,2000", or range "start:stop:step"
/// (inclusive of stop when it lands on the grid).
std::vector<double> parse_grid(const std::string& text);

void write_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace fdmimo
