#include "vosim/control.hpp"

#include <cmath>
#include <numbers>

#include "vosim/errors.hpp"

namespace vosim {

PulseTrain::PulseTrain(double low, double high, double t_start, double period,
                       double duty, double ramp)
    : low_(low), high_(high), t_start_(t_start), period_(period), duty_(duty),
      ramp_(ramp) {
  if (!(period > 0)) throw ConfigError("reference period must be positive");
  if (!(duty > 0.0) || !(duty < 1.0)) throw ConfigError("reference duty must lie in (0, 1)");
  if (ramp < 0) throw ConfigError("reference ramp must be non-negative");
  const double dwell = std::min(duty, 1.0 - duty) * period;
  if (ramp > dwell) throw ConfigError("reference ramp longer than the shorter dwell");
}

double PulseTrain::smooth(double from, double to, double since) const {
  if (ramp_ <= 0.0 || since >= ramp_) return to;
  const double c = 0.5 * (1.0 - std::cos(std::numbers::pi * since / ramp_));
  return from + (to - from) * c;
}

double PulseTrain::eval(double t) const {
  if (t < t_start_) return low_;
  const double ph = std::fmod(t - t_start_, period_);
  const double t_fall = duty_ * period_;
  if (ph < t_fall) return smooth(low_, high_, ph);
  return smooth(high_, low_, ph - t_fall);
}

IdaPbcController::IdaPbcController(const MagLevParams& plant, const Gains& g)
    : plant_(plant), g_(g) {
  if (!(g_.Kp > 0) || !(g_.alpha > 0)) {
    throw ConfigError("ida-pbc gains Kp, alpha must be positive");
  }
  lam_star_ = std::sqrt(2.0 * plant_.k * plant_.m * plant_.G);
}

double IdaPbcController::u(const Eigen::VectorXd& x, double q_star,
                           double R_feedback) const {
  const double lam = x(0), q = x(1), p = x(2);
  const double i = lam * (plant_.c - q) / plant_.k;
  return g_.r_sign * R_feedback * i -
         g_.Kp * ((lam - lam_star_) / g_.alpha + (q - q_star)) -
         (g_.alpha / plant_.m + g_.Kp) * p;
}

BacksteppingController::BacksteppingController(const MagLevParams& plant,
                                               const Gains& g, double dt)
    : plant_(plant), g_(g), dt_(dt) {
  if (!(g_.gamma1 > 0) || !(g_.gamma2 > 0)) {
    throw ConfigError("backstepping gains gamma1, gamma2 must be positive");
  }
  if (g_.Ki < 0) throw ConfigError("backstepping Ki must be non-negative");
  if (!(dt > 0)) throw ConfigError("dt must be positive");
}

double BacksteppingController::u(const Eigen::VectorXd& x, double q_star,
                                 double R_feedback) {
  const double q = x(1), p = x(2);
  // desired squared flux from the force-balance target, slowed by the
  // momentum and position errors; Upsilon can transiently go negative
  const double Upsilon =
      (2.0 / plant_.k) *
      (plant_.m * plant_.G - g_.gamma1 * p - g_.gamma2 * plant_.m * (q - q_star));
  const double root = std::sqrt(std::abs(Upsilon));
  const double sign = Upsilon >= 0.0 ? 1.0 : -1.0;
  const double u0 = R_feedback * (plant_.c - q) * root * sign - g_.Ki * uI_;
  uI_ += dt_ * (q - q_star);
  return u0;
}

}  // namespace vosim
