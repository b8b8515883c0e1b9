#pragma once

#include <Eigen/Dense>

#include "vosim/ems_models.hpp"

namespace vosim {

// Generic charge/flux observer on the electrical port with known dissipation:
//   x_E_hat' = -R_E*y + g_E*u + gamma * diag(yv)^T (B_E*y - diag(yv)*x_E_hat).
// The correction is diagonal, so each component contracts at rate gamma*yv_i^2;
// advanced by exponential Euler per component (stable at any gain) with the
// drive extrapolated from the previous step to cancel the held-drive bias.
// Assumes a constant step size across calls.
class ElectricalObserver {
 public:
  ElectricalObserver(ElectricalPort port, double gamma, Eigen::VectorXd x0);

  void step(const Eigen::VectorXd& y, const Eigen::VectorXd& u,
            const Eigen::VectorXd& yv_hat, double dt);
  const Eigen::VectorXd& x_E_hat() const { return xh_; }
  void reset(const Eigen::VectorXd& x0) {
    xh_ = x0;
    has_prev_ = false;
  }
  double gamma() const { return gamma_; }

 private:
  ElectricalPort port_;
  double gamma_;
  Eigen::VectorXd xh_;
  Eigen::VectorXd prev_drive_, prev_decay_;
  bool has_prev_ = false;
};

// Full adaptive MagLev observer: flux estimate with unknown coil resistance,
// resistance identifier from lag-filtered signals, and a reduced-order
// momentum estimator z = p + gamma_p * w built on the filtered virtual output.
// w = yv_hat/scaling is the normalized virtual output (c - q)/k.
class MagLevAdaptiveObserver {
 public:
  struct Gains {
    double a = 500.0;          // lag pole for the resistance identifier
    double gamma_R = 500.0;    // resistance adaptation gain
    double gamma_lambda = 8000.0;  // flux correction gain
    double gamma_p = 30.0;     // momentum estimator gain
    double R_hat0 = 2.0;       // initial resistance estimate
    double R_min = 0.0;        // projection interval for R_hat
    double R_max = 1e9;
    double l1 = 100.0;         // companion Luenberger mechanical observer gains
    double l2 = -1.35;
  };

  MagLevAdaptiveObserver(const MagLevParams& plant, const Gains& g, double scaling,
                         double dt);

  // Set the identifier lags to their DC fixed points. Call once at the first
  // unfrozen tick so the start-up transient of y/w does not enter the
  // resistance regression.
  void preload(double y, double u, double w);

  // Advance one dt with measured y, applied u, and normalized filtered virtual
  // output w held. r_adapt gates the resistance update separately so it can
  // start after the lags settle.
  void step(double y, double u, double w, bool r_adapt);

  double R_hat() const { return R_hat_; }
  double lambda_hat() const { return x1h_; }
  double z() const { return z_; }
  double phi_R() const { return phiR_; }
  // Position and momentum reconstructed from w and the estimator states.
  double q_hat(double w) const { return plant_.c - plant_.k * w; }
  double p_hat(double w) const { return z_ - g_.gamma_p * w; }
  // Companion Luenberger mechanical observer (runs alongside, for comparison).
  double p_hat_luenberger() const { return lb_z2_; }
  double x2_hat_luenberger() const { return lb_z1_; }

 private:
  MagLevParams plant_;
  Gains g_;
  double b_;
  double dt_;

  double R_hat_;
  double x1h_ = 0.0;  // flux estimate
  double z_ = 0.0;    // shifted momentum state
  double v1_ = 0.0, v2_ = 0.0, phiR_ = 0.0;  // identifier lag states
  double lb_z1_ = 0.0, lb_z2_ = 0.0;         // Luenberger states (x2, p)
  bool lb_init_ = false;
  // previous-step coefficients for the extrapolating integrator
  double prev_x1_drive_ = 0.0, prev_x1_decay_ = 0.0, prev_z_drive_ = 0.0;
  bool has_prev_ = false;
};

// Optical-switch observer: electrical charge observer plus an algebraic
// position reconstruction from the filtered virtual output and a momentum
// copy integrated with the reconstructed position.
class OptSwObserver {
 public:
  OptSwObserver(const OptSwParams& plant, double gamma_Q, double scaling, double dt);

  // yv_used must be floored away from zero by the caller.
  void step(double y, double u, double yv_used);

  double Q_hat() const { return Qh_; }
  double q_hat(double yv_used) const {
    return b_ / (plant_.R_C * plant_.c1 * yv_used) - plant_.c0;
  }
  double p_hat() const { return ph_; }
  void reset(double Q0, double p0) {
    Qh_ = Q0;
    ph_ = p0;
    has_prev_ = false;
  }

 private:
  OptSwParams plant_;
  double gamma_Q_;
  double b_;
  double dt_;
  double Qh_ = 0.0;
  double ph_ = 0.0;
  double prev_Q_drive_ = 0.0, prev_Q_decay_ = 0.0;
  bool has_prev_ = false;
};

}  // namespace vosim
