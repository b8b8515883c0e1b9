#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace vosim {

// One classical RK4 step of x' = f(t, x) with inputs held over [t, t+dt].
// f must accept (double t, const VectorXd& x) and return VectorXd.
template <typename F>
Eigen::VectorXd rk4_step(const F& f, double t, const Eigen::VectorXd& x, double dt) {
  const Eigen::VectorXd k1 = f(t, x);
  const Eigen::VectorXd k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = f(t + dt, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Scalar convenience overload.
template <typename F>
double rk4_step_scalar(const F& f, double t, double x, double dt) {
  const double k1 = f(t, x);
  const double k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
  const double k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
  const double k4 = f(t + dt, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// One step of x' = -decay*x + drive with coefficients frozen over the step.
// Exact for the frozen-coefficient ODE and stable for any decay*dt >= 0,
// which explicit schemes are not once decay*dt grows past ~2.8.
inline double exp_euler_step(double x, double decay, double drive, double dt) {
  const double r = decay * dt;
  // phi(r) = (1 - e^-r)/r, extended continuously through r = 0.
  double phi;
  if (r > 1e-4) {
    phi = -std::expm1(-r) / r;
  } else {
    phi = 1.0 - r / 2.0 + r * r / 6.0;
  }
  return x + dt * (drive - decay * x) * phi;
}

// Effective sampling point for a linearly varying coefficient in an
// exponential Euler step: c(r) = (r - 1 + e^-r)/(r(1 - e^-r)) moves from the
// midpoint (r -> 0) to the endpoint (r -> inf).
inline double exp_euler_sample_point(double r) {
  if (r > 1e-4) {
    const double em = -std::expm1(-r);  // 1 - e^-r
    return (r - em) / (r * em);
  }
  return 0.5 + r / 12.0;
}

// Like exp_euler_step but with the drive modeled as drive + slope*s over the
// step, integrated exactly. Holding the drive constant leaves a steady bias of
// slope*dt/2 / decay; this removes it. Reduces to exp_euler_step for slope 0.
inline double exp_euler_step_lin(double x, double decay, double drive, double slope,
                                 double dt) {
  const double c = exp_euler_sample_point(decay * dt);
  return exp_euler_step(x, decay, drive + slope * dt * c, dt);
}

// Extrapolates both coefficients of x' = -decay(t)*x + drive(t) to the
// effective sampling point. On top of the drive bias this removes the
// quasi-static ratio lag (x tracking drive/decay) left by a held decay, which
// dominates when decay*dt is large. The extrapolated decay is clamped at zero
// so a fast-falling decay cannot act as negative damping within a step.
inline double exp_euler_step_ramp(double x, double decay, double decay_slope,
                                  double drive, double drive_slope, double dt) {
  const double c = exp_euler_sample_point(std::max(decay, 0.0) * dt);
  const double d_eff = std::max(decay + decay_slope * dt * c, 0.0);
  return exp_euler_step(x, d_eff, drive + drive_slope * dt * c, dt);
}

}  // namespace vosim
