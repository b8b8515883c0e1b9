#pragma once

#include <Eigen/Dense>

namespace vosim {

// One step of the scalar gradient flow theta' = gain * Delta * (C - Delta*theta)
// with (Delta, C) held over the step. Exponential-Euler update: exact for the
// held-coefficient ODE, and |theta - C/Delta| never grows for any gain*dt >= 0.
double scalar_gradient_step(double theta, double gain, double Delta, double C, double dt);

// Estimates the virtual output y_v from the ripple Y(t) ~ S(t)*eps*y_v.
// State is y_v_hat directly (the regression unknown rescaled by 1/eps), driven by
//   y_v_hat' = (gamma/eps) * S * (Y - eps*S*y_v_hat),
// advanced by exponential Euler so arbitrarily large gamma*S^2*dt stays stable.
class VirtualOutputFilter {
 public:
  // gamma: gradient gain on the unscaled regression (decay rate is gamma*S^2).
  VirtualOutputFilter(double gamma, double epsilon, double y_v0 = 0.0);

  // Advance one dt with S and Y held; returns the new estimate.
  double step(double S, double Y, double dt);
  double y_v_hat() const { return yvh_; }
  void reset(double y_v0) { yvh_ = y_v0; }

  double gamma() const { return gamma_; }
  double epsilon() const { return eps_; }
  // Mean decay rate given the waveform's <S^2>; its inverse is the filter's
  // settling time constant, used to schedule adaptation start.
  double mean_rate(double mean_square_S) const { return gamma_ * mean_square_S; }

 private:
  double gamma_;
  double eps_;
  double yvh_;
};

// Regressor extension and mixing: given a square sensitivity Phi and stacked
// measurement C with C = Phi * theta, returns Delta = det(Phi) and
// Cmix = adj(Phi) * C, so that Cmix_i = Delta * theta_i componentwise.
struct MixedRegression {
  double Delta;
  Eigen::VectorXd C;
};
MixedRegression extend_mix(const Eigen::MatrixXd& Phi, const Eigen::VectorXd& C);

// Baseline estimator: sliding least squares of y ~ theta1 + S(t)*theta2 over a
// window of n probing periods, theta2 = eps*y_v. Running sums, O(1) per step.
class WindowDemod {
 public:
  WindowDemod(int n_periods, double epsilon, double dt);

  struct Estimate {
    double ybar = 0.0;
    double theta2 = 0.0;
    double y_v = 0.0;
    bool valid = false;  // window full and S sufficiently exciting
  };

  Estimate step(double S, double y);
  const Estimate& latest() const { return est_; }
  int n_periods() const { return n_; }

 private:
  struct Sample {
    double S, y;
  };
  std::vector<Sample> ring_;
  size_t idx_ = 0;
  size_t count_ = 0;
  double sum_S_ = 0.0, sum_SS_ = 0.0, sum_y_ = 0.0, sum_Sy_ = 0.0;
  double eps_;
  int n_;
  Estimate est_;
};

}  // namespace vosim
