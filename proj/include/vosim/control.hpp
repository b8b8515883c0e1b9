#pragma once

#include <Eigen/Dense>

#include "vosim/ems_models.hpp"

namespace vosim {

// Reference generator: pulse train between two levels with cosine-smoothed
// ramps. Holds `low` until t_start; thereafter rises at t_start + n*period and
// falls at t_start + (n + duty)*period.
class PulseTrain {
 public:
  PulseTrain(double low, double high, double t_start, double period, double duty,
             double ramp);

  double eval(double t) const;

  double low() const { return low_; }
  double high() const { return high_; }

 private:
  double smooth(double from, double to, double since) const;

  double low_, high_, t_start_, period_, duty_, ramp_;
};

// Interconnection-and-damping-assignment position controller for the MagLev.
// Uses full state feedback plus a resistance feedforward term (true or
// estimated R). The flux setpoint is fixed by force balance.
class IdaPbcController {
 public:
  struct Gains {
    double Kp = 200.7;
    double alpha = 33.4;
    double r_sign = 1.0;  // sign of the resistance feedforward term
  };

  IdaPbcController(const MagLevParams& plant, const Gains& g);

  double u(const Eigen::VectorXd& x, double q_star, double R_feedback) const;

 private:
  MagLevParams plant_;
  Gains g_;
  double lam_star_;
};

// Backstepping current controller with integral action, used on the
// experimental-rig parameter set.
class BacksteppingController {
 public:
  struct Gains {
    double gamma1 = 340.0;
    double gamma2 = 3.0;
    double Ki = 1.0;
  };

  BacksteppingController(const MagLevParams& plant, const Gains& g, double dt);

  double u(const Eigen::VectorXd& x, double q_star, double R_feedback);
  void reset() { uI_ = 0.0; }

 private:
  MagLevParams plant_;
  Gains g_;
  double dt_;
  double uI_ = 0.0;
};

}  // namespace vosim
