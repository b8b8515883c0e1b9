#pragma once

#include <map>
#include <string>

#include "vosim/metrics.hpp"
#include "vosim/scenario.hpp"
#include "vosim/trajectory.hpp"

namespace vosim {

struct RunResult {
  Trajectory traj;
  std::map<std::string, double> metrics;
  double warm_time = 0.0;     // ripple-extractor operators full
  double adapt_time = 0.0;    // observers unfrozen
  double r_adapt_time = 0.0;  // resistance adaptation enabled (if any)
  bool excitation_ok = true;  // probing energy stayed near its nominal level
};

// One deterministic sequential run of a validated scenario. All states advance
// on the fixed grid dt = epsilon/steps_per_epsilon; one log row per step.
// Throws SimulationError on guard violation or non-finite state.
RunResult run_scenario(const Scenario& sc);

}  // namespace vosim
