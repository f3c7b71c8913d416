#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fdmimo/config.hpp"
#include "fdmimo/montecarlo.hpp"

namespace fdmimo {

/// One invariant check. `margin` is positive when the check passes with room
/// to spare, in the units of the quantity tested.
struct Check {
  std::string name;
  bool passed = false;
  bool gating = true;  ///< informational checks never fail the report
  double margin = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<Check> checks;

  bool passed() const;
  void print(std::ostream& out) const;
};

/// Runs the invariant suite at `cfg`: estimator law, ZF post-conditions,
/// genie-rate oracle, bound directions against Monte Carlo, closed-form vs
/// brute-force optima, and the loss/gain bounds. Monte Carlo checks use
/// cfg.trials blocks.
ValidationReport validate_all(const SystemConfig& cfg,
                              const SimulationOptions& options = {});

}  // namespace fdmimo
