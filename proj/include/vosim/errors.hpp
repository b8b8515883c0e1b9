#pragma once

#include <stdexcept>
#include <string>

namespace vosim {

// Bad user input: malformed config, unknown key, invalid parameter value.
// CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Runtime abort: NaN/Inf state, admissibility guard tripped, lost excitation.
// CLI maps this to exit code 2.
struct SimulationError : std::runtime_error {
  explicit SimulationError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace vosim
