#include "vosim/ems_models.hpp"

#include <cmath>
#include <sstream>

#include "vosim/errors.hpp"

namespace vosim {
namespace {

void require_finite(const Eigen::VectorXd& x, double t, const char* who) {
  if (!x.allFinite()) {
    std::ostringstream os;
    os << who << ": non-finite state at t = " << t;
    throw SimulationError(os.str());
  }
}

void check_scaling(const Eigen::VectorXd& scaling) {
  if (scaling.size() != 1) throw ConfigError("scaling must have one entry per input");
}

}  // namespace

MagLevModel::MagLevModel(MagLevParams p) : p_(p) {
  if (!(p_.m > 0) || !(p_.k > 0) || !(p_.c > 0) || !(p_.R > 0) || !(p_.G > 0)) {
    throw ConfigError("maglev parameters m, G, R, c, k must be positive");
  }
}

Eigen::VectorXd MagLevModel::dynamics(const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& u) const {
  const double lam = x(0), q = x(1), p = x(2);
  Eigen::VectorXd dx(3);
  dx(0) = -p_.R * lam * (p_.c - q) / p_.k + u(0);
  dx(1) = p / p_.m;
  dx(2) = lam * lam / (2.0 * p_.k) - p_.m * p_.G;
  return dx;
}

Eigen::VectorXd MagLevModel::output(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(1);
  y(0) = x(0) * (p_.c - x(1)) / p_.k;
  return y;
}

Eigen::VectorXd MagLevModel::virtual_output(const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& scaling) const {
  check_scaling(scaling);
  Eigen::VectorXd yv(1);
  yv(0) = scaling(0) * (p_.c - x(1)) / p_.k;
  return yv;
}

void MagLevModel::check_admissible(const Eigen::VectorXd& x, double t) const {
  require_finite(x, t, "maglev");
  if (p_.c - x(1) < p_.guard_margin) {
    std::ostringstream os;
    os << "maglev: ball reached the magnet (c - q = " << p_.c - x(1)
       << " m) at t = " << t;
    throw SimulationError(os.str());
  }
}

ElectricalPort MagLevModel::electrical_port(const Eigen::VectorXd& scaling) const {
  check_scaling(scaling);
  ElectricalPort port;
  port.idx = Eigen::VectorXi::Constant(1, 0);
  port.R_E = Eigen::MatrixXd::Constant(1, 1, p_.R);
  port.g_E = Eigen::MatrixXd::Identity(1, 1);
  port.B_E = Eigen::MatrixXd::Constant(1, 1, scaling(0));
  return port;
}

std::pair<Eigen::VectorXd, double> MagLevModel::equilibrium(double q_star) const {
  if (!(q_star < p_.c)) throw ConfigError("maglev equilibrium requires q_star < c");
  const double lam_star = std::sqrt(2.0 * p_.k * p_.m * p_.G);
  Eigen::VectorXd x(3);
  x << lam_star, q_star, 0.0;
  const double u_star = p_.R * lam_star * (p_.c - q_star) / p_.k;
  return {x, u_star};
}

OptSwModel::OptSwModel(OptSwParams p) : p_(p) {
  if (!(p_.m > 0) || !(p_.c0 > 0) || !(p_.c1 > 0) || !(p_.R_C > 0) || !(p_.a1 > 0)) {
    throw ConfigError("optsw parameters m, a1, c0, c1, R_C must be positive");
  }
  if (p_.a2 < 0 || p_.R_M < 0) {
    throw ConfigError("optsw parameters a2, R_M must be non-negative");
  }
}

Eigen::VectorXd OptSwModel::dynamics(const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& u) const {
  const double Q = x(0), q = x(1), p = x(2);
  const double cap = p_.c1 * (q + p_.c0);
  const double vC = Q / cap;
  Eigen::VectorXd dx(3);
  dx(0) = (u(0) - vC) / p_.R_C;
  dx(1) = p / p_.m;
  // electrostatic pull: d/dq [Q^2 / (2 C(q))] with C linear in q
  dx(2) = -p_.a1 * q - p_.a2 * q * q * q + Q * Q / (2.0 * p_.c1 * (q + p_.c0) * (q + p_.c0)) -
          (p_.R_M / p_.m) * p;
  return dx;
}

Eigen::VectorXd OptSwModel::output(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(1);
  y(0) = x(0) / (p_.c1 * (x(1) + p_.c0));
  return y;
}

Eigen::VectorXd OptSwModel::virtual_output(const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& scaling) const {
  check_scaling(scaling);
  Eigen::VectorXd yv(1);
  yv(0) = scaling(0) / (p_.R_C * p_.c1 * (x(1) + p_.c0));
  return yv;
}

void OptSwModel::check_admissible(const Eigen::VectorXd& x, double t) const {
  require_finite(x, t, "optsw");
  if (x(1) + p_.c0 < p_.guard_margin) {
    std::ostringstream os;
    os << "optsw: plate gap collapsed (q + c0 = " << x(1) + p_.c0
       << " m) at t = " << t;
    throw SimulationError(os.str());
  }
}

ElectricalPort OptSwModel::electrical_port(const Eigen::VectorXd& scaling) const {
  check_scaling(scaling);
  ElectricalPort port;
  port.idx = Eigen::VectorXi::Constant(1, 0);
  port.R_E = Eigen::MatrixXd::Constant(1, 1, 1.0 / p_.R_C);
  port.g_E = Eigen::MatrixXd::Constant(1, 1, 1.0 / p_.R_C);
  port.B_E = Eigen::MatrixXd::Constant(1, 1, scaling(0) / p_.R_C);
  return port;
}

std::pair<Eigen::VectorXd, double> OptSwModel::equilibrium(double u) const {
  // Newton on r(q) = a1*q + a2*q^3 - c1*u^2/2, seeded at the linear solution.
  const double rhs = p_.c1 * u * u / 2.0;
  double q = rhs / p_.a1;
  for (int it = 0; it < 60; ++it) {
    const double r = p_.a1 * q + p_.a2 * q * q * q - rhs;
    const double dr = p_.a1 + 3.0 * p_.a2 * q * q;
    const double step = r / dr;
    q -= step;
    if (std::abs(step) < 1e-16 + 1e-14 * std::abs(q)) break;
  }
  Eigen::VectorXd x(3);
  x << p_.c1 * (q + p_.c0) * u, q, 0.0;
  return {x, u};
}

}  // namespace vosim
