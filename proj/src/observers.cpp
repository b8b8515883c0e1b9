#include "vosim/observers.hpp"

#include <algorithm>
#include <cmath>

#include "vosim/drem.hpp"
#include "vosim/errors.hpp"
#include "vosim/rk4.hpp"

namespace vosim {

ElectricalObserver::ElectricalObserver(ElectricalPort port, double gamma,
                                       Eigen::VectorXd x0)
    : port_(std::move(port)), gamma_(gamma), xh_(std::move(x0)) {
  if (!(gamma > 0.0)) throw ConfigError("electrical observer gain must be positive");
  if (xh_.size() != port_.R_E.rows()) {
    throw ConfigError("electrical observer initial state has wrong dimension");
  }
}

void ElectricalObserver::step(const Eigen::VectorXd& y, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& yv_hat, double dt) {
  const Eigen::VectorXd drift = -port_.R_E * y + port_.g_E * u;
  const Eigen::VectorXd mixed = port_.B_E * y;
  Eigen::VectorXd drive(xh_.size()), decay(xh_.size());
  for (Eigen::Index i = 0; i < xh_.size(); ++i) {
    const double yv = yv_hat(i);
    drive(i) = drift(i) + gamma_ * yv * mixed(i);
    decay(i) = gamma_ * yv * yv;
    const double dslope = has_prev_ ? (drive(i) - prev_drive_(i)) / dt : 0.0;
    const double kslope = has_prev_ ? (decay(i) - prev_decay_(i)) / dt : 0.0;
    xh_(i) = exp_euler_step_ramp(xh_(i), decay(i), kslope, drive(i), dslope, dt);
  }
  prev_drive_ = drive;
  prev_decay_ = decay;
  has_prev_ = true;
}

MagLevAdaptiveObserver::MagLevAdaptiveObserver(const MagLevParams& plant,
                                               const Gains& g, double scaling,
                                               double dt)
    : plant_(plant), g_(g), b_(scaling), dt_(dt), R_hat_(g.R_hat0) {
  if (!(g_.a > 0)) throw ConfigError("observer lag pole a must be positive");
  if (!(g_.gamma_R > 0) || !(g_.gamma_lambda > 0) || !(g_.gamma_p > 0)) {
    throw ConfigError("observer gains gamma_R, gamma_lambda, gamma_p must be positive");
  }
  if (!(g_.R_min < g_.R_max)) throw ConfigError("observer R projection interval is empty");
  if (b_ == 0.0) throw ConfigError("observer requires nonzero injection scaling");
  R_hat_ = std::clamp(R_hat_, g_.R_min, g_.R_max);
}

void MagLevAdaptiveObserver::preload(double y, double u, double w) {
  v1_ = u;
  v2_ = y / w;
  phiR_ = -y;
  lb_z1_ = w;
  lb_z2_ = 0.0;
  lb_init_ = true;
  has_prev_ = false;
}

void MagLevAdaptiveObserver::step(double y, double u, double w, bool r_adapt) {
  const double km = plant_.k * plant_.m;
  const double ratio = y / w;  // recovers the flux up to the filter's error

  if (r_adapt) {
    // regression Y_R = phi_R * R from the lag-filtered coil equation
    const double Y_R = -v1_ + g_.a * ratio - g_.a * v2_;
    R_hat_ = scalar_gradient_step(R_hat_, g_.gamma_R, phiR_, Y_R, dt_);
    R_hat_ = std::clamp(R_hat_, g_.R_min, g_.R_max);
  }

  // flux from the regression y = w * lambda, contraction rate gamma_lambda*w^2
  const double x1_drive = -R_hat_ * y + u + g_.gamma_lambda * w * y;
  const double x1_decay = g_.gamma_lambda * w * w;
  x1h_ = exp_euler_step_ramp(x1h_, x1_decay,
                             has_prev_ ? (x1_decay - prev_x1_decay_) / dt_ : 0.0,
                             x1_drive,
                             has_prev_ ? (x1_drive - prev_x1_drive_) / dt_ : 0.0, dt_);
  prev_x1_drive_ = x1_drive;
  prev_x1_decay_ = x1_decay;

  // shifted momentum z = p + gamma_p*w: z' = p' + gamma_p*w' with
  // w' = -p/(km) replaced through the shift, leaving a stable copy
  const double z_drive = x1h_ * x1h_ / (2.0 * plant_.k) +
                         g_.gamma_p * g_.gamma_p / km * w - plant_.m * plant_.G;
  z_ = exp_euler_step_lin(z_, g_.gamma_p / km, z_drive,
                          has_prev_ ? (z_drive - prev_z_drive_) / dt_ : 0.0, dt_);
  prev_z_drive_ = z_drive;
  has_prev_ = true;

  // companion Luenberger mechanical observer on (x2, p), innovation w - z1
  if (!lb_init_) {
    lb_z1_ = w;
    lb_init_ = true;
  }
  const double drive_p = x1h_ * x1h_ / (2.0 * plant_.k) - plant_.m * plant_.G;
  Eigen::VectorXd zlb(2);
  zlb << lb_z1_, lb_z2_;
  zlb = rk4_step(
      [this, km, w, drive_p](double, const Eigen::VectorXd& zv) {
        Eigen::VectorXd dz(2);
        const double nu = w - zv(0);
        dz(0) = -zv(1) / km + g_.l1 * nu;
        dz(1) = drive_p + g_.l2 * nu;
        return dz;
      },
      0.0, zlb, dt_);
  lb_z1_ = zlb(0);
  lb_z2_ = zlb(1);

  // identifier lags advance last, matching the continuous-time interconnection
  const double a = g_.a;
  v1_ = rk4_step_scalar([a, u](double, double x) { return a * (u - x); }, 0.0, v1_, dt_);
  v2_ = rk4_step_scalar([a, ratio](double, double x) { return a * (ratio - x); }, 0.0, v2_, dt_);
  phiR_ = rk4_step_scalar([a, y](double, double x) { return a * (-y - x); }, 0.0, phiR_, dt_);
}

OptSwObserver::OptSwObserver(const OptSwParams& plant, double gamma_Q, double scaling,
                             double dt)
    : plant_(plant), gamma_Q_(gamma_Q), b_(scaling), dt_(dt) {
  if (!(gamma_Q > 0)) throw ConfigError("optsw observer gain must be positive");
  if (b_ == 0.0) throw ConfigError("optsw observer requires nonzero injection scaling");
}

void OptSwObserver::step(double y, double u, double yv_used) {
  // charge observer on the electrical port, regression (b/R_C)*y = yv*Q
  const double Q_drive =
      (u - y) / plant_.R_C + gamma_Q_ * yv_used * (b_ / plant_.R_C) * y;
  const double Q_decay = gamma_Q_ * yv_used * yv_used;
  Qh_ = exp_euler_step_ramp(Qh_, Q_decay,
                            has_prev_ ? (Q_decay - prev_Q_decay_) / dt_ : 0.0, Q_drive,
                            has_prev_ ? (Q_drive - prev_Q_drive_) / dt_ : 0.0, dt_);
  prev_Q_drive_ = Q_drive;
  prev_Q_decay_ = Q_decay;
  has_prev_ = true;

  const double qh = q_hat(yv_used);
  const double gap = qh + plant_.c0;
  const double force = -plant_.a1 * qh - plant_.a2 * qh * qh * qh +
                       Qh_ * Qh_ / (2.0 * plant_.c1 * gap * gap);
  ph_ = rk4_step_scalar(
      [this, force](double, double p) { return force - plant_.R_M / plant_.m * p; }, 0.0,
      ph_, dt_);
}

}  // namespace vosim
