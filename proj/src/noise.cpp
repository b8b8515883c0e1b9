#include "vosim/noise.hpp"

#include <cmath>
#include <numbers>

#include "vosim/errors.hpp"

namespace vosim {

NoiseSource::NoiseSource(double power, double sample_time, uint64_t seed)
    : sample_time_(sample_time), gen_(seed) {
  if (power < 0) throw ConfigError("noise power must be non-negative");
  if (!(sample_time > 0)) throw ConfigError("noise sample_time must be positive");
  sigma_ = std::sqrt(power / sample_time);
}

double NoiseSource::normal() {
  // 53-bit mantissa mapping; u1 in (0, 1] so the log is finite
  const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
  const double u2 = static_cast<double>(gen_() >> 11) * 0x1p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double NoiseSource::at_step(uint64_t k, double dt) {
  if (sigma_ == 0.0) return 0.0;
  if (k >= next_redraw_) {
    held_ = sigma_ * normal();
    const auto hold = static_cast<uint64_t>(std::llround(sample_time_ / dt));
    next_redraw_ = k + (hold > 0 ? hold : 1);
  }
  return held_;
}

}  // namespace vosim
