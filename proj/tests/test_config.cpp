#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "fdmimo/config.hpp"

using namespace fdmimo;

namespace {

SystemConfig reference_config() {
  SystemConfig cfg;
  cfg.users = 8;
  cfg.block_length = 2000;
  cfg.power = 10.0;
  cfg.feedback_fraction = 0.1;
  cfg.ini_factor = 0.1;
  return cfg;
}

std::string error_of(const SystemConfig& cfg) {
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("reference parameter set is valid") {
  const SystemConfig cfg = reference_config();
  CHECK(validate(cfg) == cfg);
}

TEST_CASE("validate names the first violated invariant") {
  SystemConfig cfg = reference_config();
  cfg.users = 1;
  CHECK(error_of(cfg) == "M must be >= 2");

  cfg = reference_config();
  cfg.block_length = 8;
  CHECK(error_of(cfg) == "T must be >= 2M");

  cfg = reference_config();
  cfg.block_length = 16;
  CHECK(error_of(cfg).empty());

  cfg = reference_config();
  cfg.feedback_fraction = 0.0;
  CHECK(error_of(cfg) == "f must be in (0, 1]");
  cfg.feedback_fraction = 1.5;
  CHECK(error_of(cfg) == "f must be in (0, 1]");
  cfg.feedback_fraction = 1.0;
  CHECK(error_of(cfg).empty());

  cfg = reference_config();
  cfg.ini_factor = -0.1;
  CHECK(error_of(cfg) == "alpha must be >= 0");
  cfg.ini_factor = 0.0;
  CHECK(error_of(cfg).empty());

  cfg = reference_config();
  cfg.power = 0.0;
  CHECK(error_of(cfg) == "P must be > 0");
}

TEST_CASE("validate is idempotent on random valid configs") {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> users(2, 32);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    SystemConfig cfg;
    cfg.users = users(gen);
    cfg.block_length = 2 * cfg.users + static_cast<int>(unit(gen) * 5000);
    cfg.power = std::pow(10.0, 4.0 * unit(gen) - 2.0);
    cfg.feedback_fraction = 1.0 - unit(gen) * 0.999;
    cfg.ini_factor = 10.0 * unit(gen);
    CHECK(validate(validate(cfg)) == validate(cfg));
  }
}

TEST_CASE("dB to linear round-trips") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> exponent(-12.0, 12.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::pow(10.0, exponent(gen));
    CHECK(std::abs(db_to_linear(linear_to_db(x)) - x) / x < 1e-12);
  }
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(db_to_linear(0.0) == 1.0);
}

TEST_CASE("settings file overrides defaults") {
  const auto path =
      std::filesystem::temp_directory_path() / "fdmimo_test_config.txt";
  {
    std::ofstream out(path);
    out << "# scenario\nM = 4\nT=500\nsnr_db=20   # comment\n\nf=0.5\n"
           "alpha=0\ntrials=12\nseed=99\n";
  }
  SystemConfig cfg;
  apply_settings(cfg, read_settings_file(path));
  CHECK(cfg.users == 4);
  CHECK(cfg.block_length == 500);
  CHECK(cfg.power == doctest::Approx(100.0));
  CHECK(cfg.feedback_fraction == 0.5);
  CHECK(cfg.ini_factor == 0.0);
  CHECK(cfg.trials == 12);
  CHECK(cfg.seed == 99u);
  std::filesystem::remove(path);
}

TEST_CASE("settings text round-trips through the parser") {
  SystemConfig cfg = reference_config();
  cfg.power = 3.0 / 7.0;
  cfg.seed = 123456789012345ull;
  const auto path =
      std::filesystem::temp_directory_path() / "fdmimo_roundtrip.txt";
  {
    std::ofstream out(path);
    out << to_settings_text(cfg);
  }
  SystemConfig back;
  apply_settings(back, read_settings_file(path));
  CHECK(back == cfg);
  std::filesystem::remove(path);
}

TEST_CASE("malformed settings are rejected") {
  SystemConfig cfg;
  CHECK_THROWS_AS(apply_settings(cfg, {{"M", "eight"}}), ConfigError);
  CHECK_THROWS_AS(apply_settings(cfg, {{"P", "1.0x"}}), ConfigError);
  CHECK_THROWS_AS(apply_settings(cfg, {{"gamma", "1"}}), ConfigError);
  CHECK_THROWS_AS(read_settings_file("/nonexistent/fdmimo.cfg"), ConfigError);
}
