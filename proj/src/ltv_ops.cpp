#include "vosim/ltv_ops.hpp"

#include <cmath>

#include "vosim/errors.hpp"
#include "vosim/rk4.hpp"

namespace vosim {
namespace {

size_t steps_for(double span, double dt, const char* what) {
  if (!(span > 0.0)) throw ConfigError(std::string(what) + " must be positive");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  const double ratio = span / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-6 * ratio) {
    throw ConfigError(std::string(what) + " must be an integer multiple of dt");
  }
  return static_cast<size_t>(rounded);
}

}  // namespace

DelayLine::DelayLine(double delay, double dt) : delay_(delay) {
  buf_.assign(steps_for(delay, dt, "delay"), 0.0);
}

double DelayLine::step(double v) {
  const double out = buf_[idx_];
  buf_[idx_] = v;
  idx_ = (idx_ + 1) % buf_.size();
  if (count_ < buf_.size()) ++count_;
  return out;
}

WindowedMean::WindowedMean(double window, double dt) : window_(window), dt_(dt) {
  chi_ring_.assign(steps_for(window, dt, "window"), 0.0);
}

double WindowedMean::step(double v) {
  if (have_prev_) {
    chi_ += 0.5 * dt_ * (prev_ + v);
  }
  prev_ = v;
  have_prev_ = true;

  const double chi_old = chi_ring_[idx_];  // integral one window ago (0 during fill)
  chi_ring_[idx_] = chi_;
  idx_ = (idx_ + 1) % chi_ring_.size();
  if (count_ < chi_ring_.size()) ++count_;
  return (chi_ - chi_old) / window_;
}

FirstOrderLag::FirstOrderLag(double pole, double dt) : a_(pole), dt_(dt) {
  if (!(pole > 0.0)) throw ConfigError("lag pole must be positive");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
}

double FirstOrderLag::step(double v) {
  x_ = rk4_step_scalar([this, v](double, double x) { return a_ * (v - x); }, 0.0, x_, dt_);
  return x_;
}

RippleExtractor::RippleExtractor(double d, double dt)
    : delay_(d, dt), mean_(2.0 * d, dt) {}

double RippleExtractor::step(double y) {
  return delay_.step(y) - mean_.step(y);
}

std::complex<double> gd_response(double d, double omega) {
  if (!(d > 0.0)) throw ConfigError("d must be positive");
  if (omega == 0.0) return {0.0, 0.0};
  const std::complex<double> jwd(0.0, omega * d);
  return std::exp(-jwd) + (std::exp(-2.0 * jwd) - 1.0) / (2.0 * jwd);
}

}  // namespace vosim
