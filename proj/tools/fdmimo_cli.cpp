// fdmimo: full-duplex open-loop training experiments for multiuser MIMO
// broadcast channels.
//
//   fdmimo sweep-t   --grid 500,1000,2000 --out block_length.csv
//   fdmimo sweep-snr --grid -5:20:5 --out snr.csv
//   fdmimo rates | optimize | simulate | validate [scenario flags]
//
// Every scenario flag can also come from a key=value file (--config) or an
// FDMIMO_* environment variable; explicit flags win.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fdmimo/channel.hpp"
#include "fdmimo/config.hpp"
#include "fdmimo/montecarlo.hpp"
#include "fdmimo/optimizer.hpp"
#include "fdmimo/rates.hpp"
#include "fdmimo/sweep.hpp"
#include "fdmimo/validation.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

enum ExitCode { kSuccess = 0, kValidationFailure = 1, kBadArguments = 2 };

struct ScenarioFlags {
  std::string config_file;
  std::optional<int> users;
  std::optional<int> block_length;
  std::optional<double> snr_db;
  std::optional<double> f;
  std::optional<double> alpha;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::string mode = "analytic";
  int threads = 1;
  std::string out;
};

void add_scenario_flags(CLI::App& app, ScenarioFlags& s) {
  app.add_option("--config", s.config_file, "key=value scenario file")
      ->envname("FDMIMO_CONFIG");
  app.add_option("--M", s.users, "antennas = users (default 8)")
      ->envname("FDMIMO_M");
  app.add_option("--T", s.block_length, "coherence block length (default 2000)")
      ->envname("FDMIMO_T");
  app.add_option("--snr-db", s.snr_db, "SNR in dB, P = 10^(dB/10) (default 10)")
      ->envname("FDMIMO_SNR_DB");
  app.add_option("--f", s.f, "feedback power fraction (default 0.1)")
      ->envname("FDMIMO_F");
  app.add_option("--alpha", s.alpha, "INI strength (default 0.1)")
      ->envname("FDMIMO_ALPHA");
  app.add_option("--trials", s.trials, "Monte Carlo blocks (default 10000)")
      ->envname("FDMIMO_TRIALS");
  app.add_option("--seed", s.seed, "RNG seed (default 1)")
      ->envname("FDMIMO_SEED");
  app.add_option("--mode", s.mode, "objective: analytic or simulated")
      ->check(CLI::IsMember({"analytic", "simulated"}))
      ->envname("FDMIMO_MODE");
  app.add_option("--threads", s.threads, "worker threads")
      ->check(CLI::PositiveNumber)
      ->envname("FDMIMO_THREADS");
  app.add_option("--out", s.out, "output file (default stdout)");
}

fdmimo::SystemConfig resolve(const ScenarioFlags& s) {
  fdmimo::SystemConfig cfg;
  if (!s.config_file.empty())
    fdmimo::apply_settings(cfg, fdmimo::read_settings_file(s.config_file));
  if (s.users) cfg.users = *s.users;
  if (s.block_length) cfg.block_length = *s.block_length;
  if (s.snr_db) cfg.power = fdmimo::db_to_linear(*s.snr_db);
  if (s.f) cfg.feedback_fraction = *s.f;
  if (s.alpha) cfg.ini_factor = *s.alpha;
  if (s.trials) cfg.trials = *s.trials;
  if (s.seed) cfg.seed = *s.seed;
  return fdmimo::validate(cfg);
}

/// Output sink: the --out file, or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void write_metadata(const std::string& out, const std::string& command,
                    const fdmimo::SystemConfig& cfg, const ScenarioFlags& s,
                    double seconds) {
  if (out.empty()) return;
  std::ofstream meta(out + ".meta");
  meta << "command=" << command << "\n"
       << "version=" << kVersion << "\n"
       << "mode=" << s.mode << "\n"
       << "threads=" << s.threads << "\n"
       << fdmimo::to_settings_text(cfg) << "elapsed_seconds=" << seconds
       << "\n";
}

void print_kv(std::ostream& out, const char* key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  out << key << '=' << buf << '\n';
}

int run_sweep(const std::string& command, const ScenarioFlags& s,
              const std::string& grid_text) {
  const auto start = std::chrono::steady_clock::now();
  const fdmimo::SystemConfig base = resolve(s);
  const auto grid = fdmimo::parse_grid(grid_text);
  fdmimo::SweepOptions options;
  options.mode = fdmimo::parse_mode(s.mode);
  options.simulation.threads = s.threads;
  const auto rows = command == "sweep-t"
                        ? fdmimo::sweep_block_length(base, grid, options)
                        : fdmimo::sweep_snr(base, grid, options);
  Sink sink(s.out);
  fdmimo::write_csv(sink.stream(), rows);
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  write_metadata(s.out, command, base, s, seconds);
  return kSuccess;
}

int run_rates(const ScenarioFlags& s) {
  const auto cfg = resolve(s);
  const auto rb = fdmimo::make_breakdown(cfg);
  Sink sink(s.out);
  auto& out = sink.stream();
  out << "# rates in nats per channel use\n";
  print_kv(out, "P", cfg.power);
  print_kv(out, "genie_rate", rb.genie);
  print_kv(out, "invariant_ini_loss", rb.invariant_ini);
  print_kv(out, "data_loss_T0", rb.data_loss(0));
  for (int b = 1; b <= 10; ++b) {
    const std::string key = "beta_" + std::to_string(b);
    print_kv(out, (key + "_data_loss").c_str(), rb.data_loss(b * cfg.users));
    print_kv(out, (key + "_ini_loss").c_str(), rb.ini_loss(b));
  }
  return kSuccess;
}

int run_optimize(const ScenarioFlags& s) {
  const auto cfg = resolve(s);
  const auto rb = fdmimo::make_breakdown(cfg);
  fdmimo::SweepOptions options;
  options.mode = fdmimo::parse_mode(s.mode);
  options.simulation.threads = s.threads;
  const auto profile =
      options.mode == fdmimo::Mode::analytic
          ? fdmimo::analytic_profile(rb, fdmimo::max_training_cycles(cfg))
          : fdmimo::simulated_profile(cfg, options.simulation);
  Sink sink(s.out);
  auto& out = sink.stream();
  for (auto strategy : {fdmimo::Strategy::cab, fdmimo::Strategy::half_duplex}) {
    const auto plan = fdmimo::brute_force_optimum(cfg, strategy, profile, rb);
    const std::string p = fdmimo::to_string(strategy);
    print_kv(out, (p + "_t_star_exact").c_str(), plan.t_star_exact);
    print_kv(out, (p + "_t_star_approx").c_str(), plan.t_star_approx);
    print_kv(out, (p + "_t_star_rounded").c_str(), plan.t_star_rounded);
    print_kv(out, (p + "_ar_at_exact").c_str(), plan.ar_at_exact);
    print_kv(out, (p + "_ar_at_approx").c_str(), plan.ar_at_approx);
  }
  print_kv(out, "genie_rate", profile.genie);
  print_kv(out, "loss_bound_cab", fdmimo::loss_bound_cab(cfg, rb));
  print_kv(out, "loss_bound_hd", fdmimo::loss_bound_hd(cfg, rb));
  return kSuccess;
}

int run_simulate(const ScenarioFlags& s, const std::string& strategy_name,
                 int training, const std::string& ini_name,
                 const std::string& trace_out, const std::string& dump_out) {
  const auto cfg = resolve(s);
  const auto rb = fdmimo::make_breakdown(cfg);
  const auto strategy = strategy_name == "cab" ? fdmimo::Strategy::cab
                                               : fdmimo::Strategy::half_duplex;
  if (training <= 0) {
    const double approx = strategy == fdmimo::Strategy::cab
                              ? fdmimo::t_cab_approx(cfg, rb).value
                              : fdmimo::t_hd_approx(cfg, rb).value;
    training = fdmimo::round_to_cycle(approx, cfg);
    if (strategy == fdmimo::Strategy::cab)
      training = std::max(training, 2 * cfg.users);
  }
  fdmimo::SimulationOptions options;
  options.threads = s.threads;
  options.ini = ini_name == "sampled" ? fdmimo::IniModel::sampled
                                      : fdmimo::IniModel::deterministic;
  const auto traces =
      fdmimo::simulate_ensemble(cfg, strategy, training, cfg.trials, options);
  const auto eff = fdmimo::ergodic_efficiency(traces, cfg, training);
  const double analytic = strategy == fdmimo::Strategy::cab
                              ? fdmimo::ar_cab(training, cfg, rb)
                              : fdmimo::ar_hd(training, cfg, rb);
  Sink sink(s.out);
  auto& out = sink.stream();
  out << "strategy=" << strategy_name << "\n";
  print_kv(out, "training_symbols", training);
  print_kv(out, "simulated_efficiency", eff.mean);
  print_kv(out, "simulated_std_error", eff.std_error);
  print_kv(out, "analytic_efficiency", analytic);
  if (!trace_out.empty()) {
    std::ofstream trace(trace_out, std::ios::binary);
    fdmimo::write_trace_csv(trace, traces);
  }
  if (!dump_out.empty()) {
    // Block i's channel is the first draw of stream (seed, i).
    std::vector<fdmimo::ChannelBlock> blocks;
    for (int i = 0; i < cfg.trials; ++i) {
      fdmimo::RandomStream rng(cfg.seed, static_cast<std::uint64_t>(i));
      blocks.push_back(fdmimo::sample_block(cfg, rng));
    }
    std::ofstream dump(dump_out, std::ios::binary);
    fdmimo::write_blocks(dump, blocks);
  }
  return kSuccess;
}

int run_validate(const ScenarioFlags& s) {
  const auto cfg = resolve(s);
  fdmimo::SimulationOptions options;
  options.threads = s.threads;
  const auto report = fdmimo::validate_all(cfg, options);
  Sink sink(s.out);
  report.print(sink.stream());
  return report.passed() ? kSuccess : kValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-duplex open-loop training for multiuser MIMO broadcast"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  ScenarioFlags flags;
  std::string grid;
  std::string strategy = "cab";
  int training = 0;
  std::string ini = "deterministic";
  std::string trace_out;
  std::string dump_out;

  auto* sweep_t = app.add_subcommand("sweep-t", "sweep the block length T");
  add_scenario_flags(*sweep_t, flags);
  sweep_t->add_option("--grid", grid, "T grid: list or start:stop:step")
      ->default_val("500,1000,2000,5000,10000,20000,50000");

  auto* sweep_snr = app.add_subcommand("sweep-snr", "sweep the SNR in dB");
  add_scenario_flags(*sweep_snr, flags);
  sweep_snr->add_option("--grid", grid, "SNR grid in dB")
      ->default_val("-5,0,5,10,15,20");

  auto* rates = app.add_subcommand("rates", "evaluate the rate-loss formulas");
  add_scenario_flags(*rates, flags);

  auto* optimize = app.add_subcommand("optimize", "optimal training lengths");
  add_scenario_flags(*optimize, flags);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo protocol run");
  add_scenario_flags(*simulate, flags);
  simulate->add_option("--strategy", strategy, "cab or hd")
      ->check(CLI::IsMember({"cab", "hd"}));
  simulate->add_option("--training", training,
                       "training symbols (default: rounded closed form)");
  simulate->add_option("--ini", ini, "deterministic or sampled")
      ->check(CLI::IsMember({"deterministic", "sampled"}));
  simulate->add_option("--trace-out", trace_out, "per-cycle trace CSV");
  simulate->add_option("--dump-blocks", dump_out, "binary channel dump");

  auto* validate = app.add_subcommand("validate", "run the invariant suite");
  add_scenario_flags(*validate, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadArguments;
  }

  try {
    if (sweep_t->parsed()) return run_sweep("sweep-t", flags, grid);
    if (sweep_snr->parsed()) return run_sweep("sweep-snr", flags, grid);
    if (rates->parsed()) return run_rates(flags);
    if (optimize->parsed()) return run_optimize(flags);
    if (simulate->parsed())
      return run_simulate(flags, strategy, training, ini, trace_out, dump_out);
    if (validate->parsed()) return run_validate(flags);
  } catch (const fdmimo::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
  return kBadArguments;
}
