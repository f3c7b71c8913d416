#include "fdmimo/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fdmimo/optimizer.hpp"
#include "fdmimo/parallel.hpp"

namespace fdmimo {

const char* to_string(Mode m) {
  return m == Mode::analytic ? "analytic" : "simulated";
}

Mode parse_mode(const std::string& text) {
  if (text == "analytic") return Mode::analytic;
  if (text == "simulated") return Mode::simulated;
  throw std::invalid_argument("unknown mode '" + text + "'");
}

namespace {

double percent_gain(double better, double baseline) {
  return baseline > 0.0 ? 100.0 * (better - baseline) / baseline
                        : std::nan("");
}

std::vector<SweepRow> run_grid(std::vector<SweepRow> rows,
                               const SweepOptions& options) {
  // Points run in parallel; simulations inside a point stay serial.
  SweepOptions inner = options;
  inner.simulation.threads = 1;
  parallel_for(rows.size(), options.simulation.threads, [&](std::size_t i) {
    const std::string swept = rows[i].swept;
    const double value = rows[i].swept_value;
    const SystemConfig cfg = rows[i].cfg;
    try {
      rows[i] = evaluate_point(cfg, inner);
    } catch (const std::exception& e) {
      rows[i] = SweepRow{};
      rows[i].cfg = cfg;
      rows[i].mode = options.mode;
      rows[i].error = e.what();
    }
    rows[i].swept = swept;
    rows[i].swept_value = value;
  });
  return rows;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

SweepRow evaluate_point(const SystemConfig& input, const SweepOptions& options) {
  const SystemConfig cfg = validate(input);
  const RateBreakdown rb = make_breakdown(cfg);
  const RateProfile profile =
      options.mode == Mode::analytic
          ? analytic_profile(rb, max_training_cycles(cfg))
          : simulated_profile(cfg, options.simulation);

  const TrainingPlan cab = brute_force_optimum(cfg, Strategy::cab, profile, rb);
  const TrainingPlan hd =
      brute_force_optimum(cfg, Strategy::half_duplex, profile, rb);

  SweepRow row;
  row.cfg = cfg;
  row.mode = options.mode;
  row.t_cab_exact = cab.t_star_exact;
  row.t_cab_approx = cab.t_star_approx;
  row.t_hd_exact = hd.t_star_exact;
  row.t_hd_approx = hd.t_star_approx;
  row.ar_genie = profile.genie;
  row.ar_cab_opt = cab.ar_at_exact;
  row.ar_hd_opt = hd.ar_at_exact;
  row.ar_cab_at_hd = ar_cab(hd.t_star_exact, cfg, profile);
  row.gain_pct = percent_gain(row.ar_cab_opt, row.ar_hd_opt);
  row.gain_pct_cab_at_hd = percent_gain(row.ar_cab_at_hd, row.ar_hd_opt);
  row.loss_bound_cab = loss_bound_cab(cfg, rb);
  row.loss_bound_hd = loss_bound_hd(cfg, rb);
  const int t_tr = round_to_cycle(hd.t_star_approx, cfg);
  row.gain_lower_bound = t_tr >= 2 * cfg.users
                             ? gain_lower_bound(cfg, rb, t_tr)
                             : std::nan("");
  return row;
}

std::vector<SweepRow> sweep_block_length(const SystemConfig& base,
                                         std::span<const double> block_lengths,
                                         const SweepOptions& options) {
  std::vector<SweepRow> rows;
  for (double t : block_lengths) {
    SweepRow r;
    r.swept = "T";
    r.swept_value = t;
    r.cfg = base;
    r.cfg.block_length = static_cast<int>(std::lround(t));
    rows.push_back(std::move(r));
  }
  return run_grid(std::move(rows), options);
}

std::vector<SweepRow> sweep_snr(const SystemConfig& base,
                                std::span<const double> snr_db,
                                const SweepOptions& options) {
  std::vector<SweepRow> rows;
  for (double db : snr_db) {
    SweepRow r;
    r.swept = "snr_db";
    r.swept_value = db;
    r.cfg = base;
    r.cfg.power = db_to_linear(db);
    rows.push_back(std::move(r));
  }
  return run_grid(std::move(rows), options);
}

std::vector<double> parse_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
      throw std::invalid_argument("bad grid value '" + s + "' in '" + text + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3)
      throw std::invalid_argument("range grid must be start:stop:step");
    const double start = number(parts[0]);
    const double stop = number(parts[1]);
    const double step = number(parts[2]);
    if (!(step > 0.0) || stop < start)
      throw std::invalid_argument("range grid needs step > 0 and stop >= start");
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(start + i * step);
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
  }
  if (out.empty()) throw std::invalid_argument("empty grid");
  return out;
}

void write_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "swept,value,M,T,snr_db,P,f,alpha,mode,trials,seed,"
         "t_cab_exact,t_cab_approx,t_hd_exact,t_hd_approx,"
         "frac_cab_exact,frac_cab_approx,frac_hd_exact,frac_hd_approx,"
         "ar_genie,ar_cab_opt,ar_hd_opt,ar_cab_at_hd,gain_pct,"
         "gain_pct_cab_at_hd,loss_bound_cab,loss_bound_hd,gain_lower_bound,"
         "error\n";
  for (const auto& r : rows) {
    const double T = r.cfg.block_length;
    const bool ok = r.error.empty();
    auto num = [&](double v) { return ok ? format_double(v) : std::string(); };
    out << r.swept << ',' << format_double(r.swept_value) << ','
        << r.cfg.users << ',' << r.cfg.block_length << ','
        << format_double(linear_to_db(r.cfg.power)) << ','
        << format_double(r.cfg.power) << ','
        << format_double(r.cfg.feedback_fraction) << ','
        << format_double(r.cfg.ini_factor) << ',' << to_string(r.mode) << ','
        << r.cfg.trials << ',' << r.cfg.seed << ','
        << (ok ? std::to_string(r.t_cab_exact) : "") << ','
        << num(r.t_cab_approx) << ','
        << (ok ? std::to_string(r.t_hd_exact) : "") << ','
        << num(r.t_hd_approx) << ',' << num(r.t_cab_exact / T) << ','
        << num(r.t_cab_approx / T) << ',' << num(r.t_hd_exact / T) << ','
        << num(r.t_hd_approx / T) << ',' << num(r.ar_genie) << ','
        << num(r.ar_cab_opt) << ',' << num(r.ar_hd_opt) << ','
        << num(r.ar_cab_at_hd) << ',' << num(r.gain_pct) << ','
        << num(r.gain_pct_cab_at_hd) << ',' << num(r.loss_bound_cab) << ','
        << num(r.loss_bound_hd) << ',' << num(r.gain_lower_bound) << ','
        << csv_escape(r.error) << '\n';
  }
}

}  // namespace fdmimo
