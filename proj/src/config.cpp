#include "fdmimo/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fdmimo {

SystemConfig validate(const SystemConfig& cfg) {
  if (cfg.users < 2) throw ConfigError("M must be >= 2");
  if (cfg.block_length < 2 * cfg.users) throw ConfigError("T must be >= 2M");
  if (!(cfg.power > 0.0) || !std::isfinite(cfg.power))
    throw ConfigError("P must be > 0");
  if (!(cfg.feedback_fraction > 0.0 && cfg.feedback_fraction <= 1.0))
    throw ConfigError("f must be in (0, 1]");
  if (!(cfg.ini_factor >= 0.0) || !std::isfinite(cfg.ini_factor))
    throw ConfigError("alpha must be >= 0");
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  return cfg;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for double is missing on older libstdc++
    char* stop = nullptr;
    value = std::strtod(text.c_str(), &stop);
    if (text.empty() || stop != text.c_str() + text.size())
      throw ConfigError("bad value for " + key + ": '" + text + "'");
  } else {
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
      throw ConfigError("bad value for " + key + ": '" + text + "'");
  }
  return value;
}

}  // namespace

void apply_settings(SystemConfig& cfg,
                    const std::map<std::string, std::string>& settings) {
  for (const auto& [key, value] : settings) {
    if (key == "M") {
      cfg.users = parse_number<int>(key, value);
    } else if (key == "T") {
      cfg.block_length = parse_number<int>(key, value);
    } else if (key == "P") {
      cfg.power = parse_number<double>(key, value);
    } else if (key == "snr_db") {
      cfg.power = db_to_linear(parse_number<double>(key, value));
    } else if (key == "f") {
      cfg.feedback_fraction = parse_number<double>(key, value);
    } else if (key == "alpha") {
      cfg.ini_factor = parse_number<double>(key, value);
    } else if (key == "trials") {
      cfg.trials = parse_number<int>(key, value);
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(key, value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

std::map<std::string, std::string> read_settings_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::map<std::string, std::string> settings;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected key=value");
    settings[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return settings;
}

std::string to_settings_text(const SystemConfig& cfg) {
  char power[64];
  std::snprintf(power, sizeof power, "%.17g", cfg.power);
  char f[64];
  std::snprintf(f, sizeof f, "%.17g", cfg.feedback_fraction);
  char alpha[64];
  std::snprintf(alpha, sizeof alpha, "%.17g", cfg.ini_factor);
  std::ostringstream out;
  out << "M=" << cfg.users << "\n"
      << "T=" << cfg.block_length << "\n"
      << "P=" << power << "\n"
      << "f=" << f << "\n"
      << "alpha=" << alpha << "\n"
      << "trials=" << cfg.trials << "\n"
      << "seed=" << cfg.seed << "\n";
  return out.str();
}

}  // namespace fdmimo
