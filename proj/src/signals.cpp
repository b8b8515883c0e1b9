#include "vosim/signals.hpp"

#include <cmath>
#include <numbers>

#include "vosim/errors.hpp"

namespace vosim {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_unit(double tau) {
  double f = tau - std::floor(tau);
  // floor can round so that f lands on 1.0 for tiny negative tau
  if (f >= 1.0) f -= 1.0;
  return f;
}

void check_common(double epsilon, const Eigen::VectorXd& scaling) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw ConfigError("probing period epsilon must lie in (0, 1)");
  }
  if (scaling.size() == 0) {
    throw ConfigError("probing scaling vector must be non-empty");
  }
  if (!scaling.allFinite()) {
    throw ConfigError("probing scaling vector must be finite");
  }
}

}  // namespace

ProbingSignal::ProbingSignal(Waveform shape, double epsilon, Eigen::VectorXd scaling)
    : shape_(shape), eps_(epsilon), scaling_(std::move(scaling)) {
  check_common(eps_, scaling_);
  if (shape_ == Waveform::Tabulated) {
    throw ConfigError("tabulated waveform requires a sample table");
  }
  if (shape_ == Waveform::Sinusoid) {
    // S0 = -cos(2*pi*tau)/(2*pi), <S0^2> = 1/(8*pi^2)
    mean_square_S_ = 1.0 / (8.0 * std::numbers::pi * std::numbers::pi);
  } else {
    // square: S0 is a triangle of range [-1/4, 1/4], <S0^2> = 1/48
    mean_square_S_ = 1.0 / 48.0;
  }
}

ProbingSignal::ProbingSignal(std::vector<double> table, double epsilon,
                             Eigen::VectorXd scaling)
    : shape_(Waveform::Tabulated), eps_(epsilon), scaling_(std::move(scaling)),
      tab_s_(std::move(table)) {
  check_common(eps_, scaling_);
  if (tab_s_.size() < 4) {
    throw ConfigError("tabulated waveform needs at least 4 samples per period");
  }
  for (double v : tab_s_) {
    if (!std::isfinite(v)) throw ConfigError("tabulated waveform has non-finite sample");
  }
  build_tabulated();
}

void ProbingSignal::build_tabulated() {
  const size_t n = tab_s_.size();
  const double h = 1.0 / static_cast<double>(n);

  // zero the waveform mean (trapezoid mean of the periodic linear interpolant
  // equals the arithmetic sample mean)
  double mean = 0.0;
  for (double v : tab_s_) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : tab_s_) v -= mean;

  // primitive at segment starts; exact for the linear interpolant
  tab_P_.assign(n + 1, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const double s0 = tab_s_[i];
    const double s1 = tab_s_[(i + 1) % n];
    tab_P_[i + 1] = tab_P_[i] + 0.5 * h * (s0 + s1);
  }
  // tab_P_[n] == 0 up to roundoff since the samples were mean-corrected

  // zero the primitive's mean: integral of the piecewise-quadratic P over one
  // period, exact per segment
  double P_mean = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double s0 = tab_s_[i];
    const double s1 = tab_s_[(i + 1) % n];
    P_mean += h * (tab_P_[i] + h * s0 / 2.0 + h * (s1 - s0) / 6.0);
  }
  for (double& p : tab_P_) p -= P_mean;

  // <S0^2>: 3-point Gauss-Legendre per segment, exact for the quartic P^2
  static const double gl_x[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static const double gl_w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double s0 = tab_s_[i];
    const double s1 = tab_s_[(i + 1) % n];
    for (int g = 0; g < 3; ++g) {
      const double u = 0.5 * (gl_x[g] + 1.0) * h;  // offset within the segment
      const double P = tab_P_[i] + s0 * u + 0.5 * (s1 - s0) / h * u * u;
      acc += gl_w[g] * 0.5 * h * P * P;
    }
  }
  mean_square_S_ = acc;
}

double ProbingSignal::s_phase(double tau) const {
  const double f = wrap_unit(tau);
  switch (shape_) {
    case Waveform::Sinusoid:
      return std::sin(kTwoPi * f);
    case Waveform::Square:
      return f < 0.5 ? 1.0 : -1.0;
    case Waveform::Tabulated: {
      const size_t n = tab_s_.size();
      const double x = f * static_cast<double>(n);
      size_t i = static_cast<size_t>(x);
      if (i >= n) i = n - 1;
      const double u = x - static_cast<double>(i);
      const double s0 = tab_s_[i];
      const double s1 = tab_s_[(i + 1) % n];
      return s0 + (s1 - s0) * u;
    }
  }
  return 0.0;
}

double ProbingSignal::S_phase(double tau) const {
  const double f = wrap_unit(tau);
  switch (shape_) {
    case Waveform::Sinusoid:
      return -std::cos(kTwoPi * f) / kTwoPi;
    case Waveform::Square:
      // triangle: rises on [0, 1/2), falls on [1/2, 1); zero mean
      return f < 0.5 ? f - 0.25 : 0.75 - f;
    case Waveform::Tabulated: {
      const size_t n = tab_s_.size();
      const double h = 1.0 / static_cast<double>(n);
      const double x = f * static_cast<double>(n);
      size_t i = static_cast<size_t>(x);
      if (i >= n) i = n - 1;
      const double u = (x - static_cast<double>(i)) * h;
      const double s0 = tab_s_[i];
      const double s1 = tab_s_[(i + 1) % n];
      return tab_P_[i] + s0 * u + 0.5 * (s1 - s0) / h * u * u;
    }
  }
  return 0.0;
}

}  // namespace vosim
