#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

namespace fdmimo {

/// Scenario parameters shared by every module.
///
/// Noise variance is fixed at one, so `power` is the linear SNR. Rates
/// throughout the library are in nats per channel use.
struct SystemConfig {
  int users = 8;                    ///< base-station antennas = single-antenna users
  int block_length = 2000;          ///< coherence block length in symbols
  double power = 10.0;              ///< base-station transmit power (linear)
  double feedback_fraction = 0.1;   ///< user pilot power as a fraction of `power`
  double ini_factor = 0.1;          ///< inter-node interference strength
  int trials = 10000;               ///< Monte Carlo blocks
  std::uint64_t seed = 1;

  /// Pilot energy of one uplink training symbol, f*P.
  double pilot_power() const { return feedback_fraction * power; }
  /// Inter-node interference power, alpha*f*P.
  double ini_power() const { return ini_factor * feedback_fraction * power; }
  /// Per-stream transmit power, P/M.
  double stream_power() const { return power / users; }

  bool operator==(const SystemConfig&) const = default;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Returns `cfg` unchanged or throws ConfigError naming the first violated
/// invariant.
SystemConfig validate(const SystemConfig& cfg);

double db_to_linear(double db);
double linear_to_db(double linear);

/// Applies `key=value` overrides. Accepted keys: M, T, P, snr_db, f, alpha,
/// trials, seed. Unknown keys and malformed values throw ConfigError.
void apply_settings(SystemConfig& cfg,
                    const std::map<std::string, std::string>& settings);

/// Parses a key=value file (`#` starts a comment, blank lines ignored).
std::map<std::string, std::string> read_settings_file(
    const std::filesystem::path& path);

/// One `key=value` per line, in the order read_settings_file accepts.
std::string to_settings_text(const SystemConfig& cfg);

}  // namespace fdmimo
