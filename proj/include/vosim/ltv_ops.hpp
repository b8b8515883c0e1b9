#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace vosim {

// Pure delay v(t) -> v(t - delay) on a fixed grid; zero history before start.
// delay must be an integer multiple of dt.
class DelayLine {
 public:
  DelayLine(double delay, double dt);

  // Push the sample at the current tick, return the delayed value.
  double step(double v);
  // True once a full delay's worth of real samples has been seen.
  bool warm() const { return count_ >= buf_.size(); }
  double delay() const { return delay_; }

 private:
  std::vector<double> buf_;
  size_t idx_ = 0;
  size_t count_ = 0;
  double delay_;
};

// Sliding-window mean over [t - window, t] of the trapezoid running integral.
// Equals the windowed zero-order-hold average used to strip the signal's
// oscillatory component; zero-padded before the window fills.
class WindowedMean {
 public:
  WindowedMean(double window, double dt);

  double step(double v);
  bool warm() const { return count_ >= chi_ring_.size(); }
  double window() const { return window_; }

 private:
  std::vector<double> chi_ring_;  // integral values, one window deep
  size_t idx_ = 0;
  size_t count_ = 0;
  double chi_ = 0.0;
  double prev_ = 0.0;
  bool have_prev_ = false;
  double window_;
  double dt_;
};

// First-order lowpass a/(s+a), advanced by RK4 on a held input.
class FirstOrderLag {
 public:
  FirstOrderLag(double pole, double dt);

  // Advance one dt with input held at v; returns the new state.
  double step(double v);
  double state() const { return x_; }
  void reset(double x0) { x_ = x0; }
  double pole() const { return a_; }

 private:
  double a_;
  double dt_;
  double x_ = 0.0;
};

// Ripple extractor Y(t) = delay_d[y](t) - windowed_mean_{2d}[y](t).
// On a signal y = ybar + S(t)*theta2 with slowly varying ybar, Y recovers
// S(t-d)*theta2(t-d) up to a second-order residual in the probing period.
class RippleExtractor {
 public:
  RippleExtractor(double d, double dt);

  double step(double y);
  bool warm() const { return delay_.warm() && mean_.warm(); }
  double d() const { return delay_.delay(); }

 private:
  DelayLine delay_;
  WindowedMean mean_;
};

// Frequency response of the ripple extractor,
// G_d(jw) = e^{-jwd} + (e^{-2jwd} - 1) / (2jwd), with G_d(0) = 0 exactly.
std::complex<double> gd_response(double d, double omega);

}  // namespace vosim
