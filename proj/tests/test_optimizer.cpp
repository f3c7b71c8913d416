#include <cmath>
#include <vector>

#include "doctest.h"
#include "fdmimo/optimizer.hpp"
#include "fdmimo/rates.hpp"

using namespace fdmimo;

namespace {

SystemConfig reference(int block_length = 2000) {
  SystemConfig cfg;
  cfg.users = 8;
  cfg.block_length = block_length;
  cfg.power = 10.0;
  cfg.feedback_fraction = 0.1;
  cfg.ini_factor = 0.1;
  return cfg;
}

int t_star(const SystemConfig& cfg, Strategy s) {
  return brute_force_optimum(cfg, s).t_star_exact;
}

}  // namespace

TEST_CASE("closed forms solve their defining quadratic") {
  const SystemConfig cfg = reference();
  const RateBreakdown rb = make_breakdown(cfg);
  const double c_cab = cfg.feedback_fraction * rb.invariant_ini / cfg.users;
  const double c_hd = cfg.feedback_fraction * rb.genie / (cfg.users - 1);
  for (auto [form, c] : {std::pair{t_cab_approx(cfg, rb), c_cab},
                         std::pair{t_hd_approx(cfg, rb), c_hd}}) {
    const double t = form.value;
    CHECK(c * t * t + t == doctest::Approx(cfg.block_length).epsilon(1e-12));
    CHECK(form.simplified == doctest::Approx(std::sqrt(cfg.block_length / c)));
  }
}

TEST_CASE("no INI means training for the whole block") {
  SystemConfig cfg = reference();
  cfg.ini_factor = 0.0;
  const ClosedForm t = t_cab_approx(cfg, make_breakdown(cfg));
  CHECK(t.value == cfg.block_length - cfg.users);
  CHECK(round_to_cycle(t.value, cfg) == cfg.block_length - cfg.users);
  CHECK(t_star(cfg, Strategy::cab) == cfg.block_length - cfg.users);
}

TEST_CASE("exact and simplified closed forms converge for large cT") {
  for (int t : {2000, 20000, 200000}) {
    const SystemConfig cfg = reference(t);
    const RateBreakdown rb = make_breakdown(cfg);
    for (const ClosedForm& form : {t_cab_approx(cfg, rb), t_hd_approx(cfg, rb)}) {
      const double c = cfg.block_length / (form.simplified * form.simplified);
      if (c * cfg.block_length >= 100.0)
        CHECK(std::abs(form.value - form.simplified) / form.simplified < 0.05);
    }
  }
}

TEST_CASE("quadrupling T doubles the half-duplex length") {
  double prev = INFINITY;
  for (int t : {500, 2000, 5000, 20000}) {
    const RateBreakdown a = make_breakdown(reference(t));
    const RateBreakdown b = make_breakdown(reference(4 * t));
    const double ratio =
        t_hd_approx(reference(4 * t), b).value / t_hd_approx(reference(t), a).value;
    CHECK(ratio > 2.0);
    CHECK(ratio < prev);
    prev = ratio;
    if (t >= 5000) CHECK(ratio <= 2.1);
  }
}

TEST_CASE("asymptotic loss bounds halve when T quadruples") {
  const SystemConfig a = reference(2000);
  const SystemConfig b = reference(8000);
  const RateBreakdown ra = make_breakdown(a);
  const RateBreakdown rb = make_breakdown(b);
  CHECK(loss_bound_cab(b, rb) == doctest::Approx(loss_bound_cab(a, ra) / 2));
  CHECK(loss_bound_hd(b, rb) == doctest::Approx(loss_bound_hd(a, ra) / 2));
  CHECK(loss_bound_cab_slack(b, rb) == doctest::Approx(loss_bound_cab_slack(a, ra) / 4));
  // R_zf (M-1) >= M dR_inv at this operating point.
  CHECK(loss_bound_hd(a, ra) >= loss_bound_cab(a, ra));
}

TEST_CASE("round_to_cycle snaps to the grid") {
  const SystemConfig cfg = reference();
  CHECK(round_to_cycle(1143.7, cfg) == 1144);
  CHECK(round_to_cycle(1148.1, cfg) == 1152);
  CHECK(round_to_cycle(0.0, cfg) == 8);
  CHECK(round_to_cycle(1e9, cfg) == 1992);
}

TEST_CASE("grid optimum at the default operating point") {
  const SystemConfig cfg = reference();
  const TrainingPlan cab = brute_force_optimum(cfg, Strategy::cab);
  const TrainingPlan hd = brute_force_optimum(cfg, Strategy::half_duplex);
  CHECK(cab.t_star_exact == 1160);
  CHECK(hd.t_star_exact == 416);
  CHECK(cab.t_star_rounded == 1144);
  CHECK(hd.t_star_rounded == 400);
  CHECK(cab.ar_at_exact > hd.ar_at_exact);
  CHECK(cab.ar_at_exact >= cab.ar_at_approx);
  const double genie = genie_rate(cfg);
  CHECK(genie > cab.ar_at_exact);
}

TEST_CASE("ties resolve to the shorter training length") {
  const SystemConfig cfg = reference(80);
  RateProfile flat;
  flat.genie = 1.0;
  flat.no_ini.assign(max_training_cycles(cfg) + 1, 1.0);
  flat.with_ini.assign(max_training_cycles(cfg) + 1, 1.0);
  flat.no_ini[1] = flat.with_ini[1] = 0.0;
  // CAB with constant unit rates after the first cycle: every b >= 2 ties.
  const TrainingPlan plan =
      brute_force_optimum(cfg, Strategy::cab, flat, make_breakdown(cfg));
  CHECK(plan.t_star_exact == 16);
}

TEST_CASE("optimal CAB length shrinks with INI, feedback power and SNR") {
  SystemConfig cfg = reference();
  int prev = 1 << 30;
  for (double a : {0.01, 0.1, 1.0, 10.0}) {
    cfg.ini_factor = a;
    const int t = t_star(cfg, Strategy::cab);
    CHECK(t <= prev);
    prev = t;
  }

  cfg = reference();
  for (Strategy s : {Strategy::cab, Strategy::half_duplex}) {
    prev = 1 << 30;
    for (double f : {0.05, 0.1, 0.5, 1.0}) {
      cfg.feedback_fraction = f;
      const int t = t_star(cfg, s);
      CHECK(t <= prev);
      prev = t;
    }
  }

  cfg = reference();
  for (Strategy s : {Strategy::cab, Strategy::half_duplex}) {
    prev = 1 << 30;
    for (double db : {0.0, 5.0, 10.0, 15.0, 20.0}) {
      cfg.power = db_to_linear(db);
      const int t = t_star(cfg, s);
      CHECK(t <= prev);
      prev = t;
    }
  }
}

TEST_CASE("half-duplex efficiency is unimodal on the grid") {
  const SystemConfig cfg = reference();
  const RateProfile p =
      analytic_profile(make_breakdown(cfg), max_training_cycles(cfg));
  const auto curve = ar_hd_curve(cfg, p);
  int local_max = 0;
  for (std::size_t i = 1; i + 1 < curve.size(); ++i)
    if (curve[i] > curve[i - 1] && curve[i] >= curve[i + 1]) ++local_max;
  CHECK(local_max == 1);
}

TEST_CASE("finite-T bounds hold across the grid") {
  for (int t : {500, 1000, 2000, 5000, 20000}) {
    for (double db : {0.0, 10.0, 20.0}) {
      SystemConfig cfg = reference(t);
      cfg.power = db_to_linear(db);
      const RateBreakdown rb = make_breakdown(cfg);
      const RateProfile p = analytic_profile(rb, max_training_cycles(cfg));
      const auto cab = ar_cab_curve(cfg, p);
      const auto hd = ar_hd_curve(cfg, p);
      for (std::size_t i = 0; i < cab.size(); i += 7) {
        const int tr = static_cast<int>(i + 1) * cfg.users;
        CHECK(rb.genie - cab[i] <= loss_bound_cab_finite(cfg, rb, tr) + 1e-12);
        CHECK(cab[i] - hd[i] >= gain_lower_bound_finite(cfg, rb, tr) - 1e-12);
      }
      const TrainingPlan hd_plan = brute_force_optimum(cfg, Strategy::half_duplex, p, rb);
      CHECK(rb.genie - hd_plan.ar_at_exact <= loss_bound_hd(cfg, rb));
    }
  }
}

TEST_CASE("gain lower bound needs two cycles") {
  const SystemConfig cfg = reference();
  const RateBreakdown rb = make_breakdown(cfg);
  CHECK_THROWS(gain_lower_bound(cfg, rb, 8));
  CHECK(std::isfinite(gain_lower_bound(cfg, rb, 16)));
}
