#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace vosim {

// Electrical-port structure of an electromechanical model, in the form
//   x_E' = -R_E * y + g_E * u   (+ coupling handled inside the full dynamics),
// with the regression identity B_E * y == diag(y_v) * x_E used by the
// charge/flux observer. All matrices are sized to the electrical block.
struct ElectricalPort {
  Eigen::VectorXi idx;  // indices of the electrical states within x
  Eigen::MatrixXd R_E;
  Eigen::MatrixXd g_E;
  Eigen::MatrixXd B_E;
};

class EmsModel {
 public:
  virtual ~EmsModel() = default;

  virtual std::string name() const = 0;
  virtual int state_dim() const = 0;
  virtual int input_dim() const = 0;
  virtual std::vector<std::string> state_names() const = 0;

  virtual Eigen::VectorXd dynamics(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& u) const = 0;
  // Natural (power-conjugate) output actually measured.
  virtual Eigen::VectorXd output(const Eigen::VectorXd& x) const = 0;
  // Virtual output y_v = dh/dx * g * scaling: the sensitivity of the measured
  // output to the injected input direction. Position-dependent; this is what
  // the DREM filter reconstructs from the injection ripple.
  virtual Eigen::VectorXd virtual_output(const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& scaling) const = 0;
  // Throws SimulationError when x leaves the admissible region or goes non-finite.
  virtual void check_admissible(const Eigen::VectorXd& x, double t) const = 0;

  virtual ElectricalPort electrical_port(const Eigen::VectorXd& scaling) const = 0;
};

// 1-DOF magnetic levitation: state x = (lambda, q, p), input u = coil voltage.
// Inductance L(q) = k/(c - q); measured output y = coil current
// i = lambda*(c-q)/k; virtual output y_v = scaling*(c-q)/k.
struct MagLevParams {
  double m = 0.0844;   // ball mass [kg]
  double G = 9.81;     // gravity [m/s^2]
  double R = 2.52;     // coil resistance [Ohm]
  double c = 0.005;    // position where inductance diverges [m]
  double k = 0.0064042;  // inductance scale [H*m]
  double guard_margin = 1e-6;  // abort when c - q falls below this
};

class MagLevModel : public EmsModel {
 public:
  explicit MagLevModel(MagLevParams p);

  std::string name() const override { return "maglev"; }
  int state_dim() const override { return 3; }
  int input_dim() const override { return 1; }
  std::vector<std::string> state_names() const override { return {"lambda", "q", "p"}; }

  Eigen::VectorXd dynamics(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const override;
  Eigen::VectorXd output(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd virtual_output(const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& scaling) const override;
  void check_admissible(const Eigen::VectorXd& x, double t) const override;
  ElectricalPort electrical_port(const Eigen::VectorXd& scaling) const override;

  // Hover equilibrium at position q_star: flux balances gravity.
  // Returns (x_star, u_star).
  std::pair<Eigen::VectorXd, double> equilibrium(double q_star) const;

  const MagLevParams& params() const { return p_; }

 private:
  MagLevParams p_;
};

// Electrostatic actuator (optical switch): state x = (Q, q, p), input u =
// drive voltage behind series resistance R_C. Capacitance C(q) = c1*(q + c0);
// measured output y = capacitor voltage v_C = Q/(c1*(q+c0));
// virtual output y_v = scaling/(R_C*c1*(q+c0)).
struct OptSwParams {
  double m = 1e-4;    // shuttle mass [kg]
  double a1 = 20.0;   // linear spring [N/m]
  double a2 = 2e6;    // cubic spring [N/m^3]
  double c0 = 1e-3;   // capacitance offset [m]
  double c1 = 1e-3;   // capacitance slope [F/m]
  double R_C = 50.0;  // series resistance [Ohm]
  double R_M = 0.02;  // mechanical damping [N*s/m]
  double guard_margin = 1e-6;  // abort when q + c0 falls below this
};

class OptSwModel : public EmsModel {
 public:
  explicit OptSwModel(OptSwParams p);

  std::string name() const override { return "optsw"; }
  int state_dim() const override { return 3; }
  int input_dim() const override { return 1; }
  std::vector<std::string> state_names() const override { return {"Q", "q", "p"}; }

  Eigen::VectorXd dynamics(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const override;
  Eigen::VectorXd output(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd virtual_output(const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& scaling) const override;
  void check_admissible(const Eigen::VectorXd& x, double t) const override;
  ElectricalPort electrical_port(const Eigen::VectorXd& scaling) const override;

  // DC equilibrium under constant drive voltage u: spring balances the
  // electrostatic pull, a1*q + a2*q^3 = c1*u^2/2. Returns (x_bar, u).
  std::pair<Eigen::VectorXd, double> equilibrium(double u) const;

  const OptSwParams& params() const { return p_; }

 private:
  OptSwParams p_;
};

}  // namespace vosim
