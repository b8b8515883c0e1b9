#include "vosim/drem.hpp"

#include <cmath>

#include "vosim/errors.hpp"
#include "vosim/rk4.hpp"

namespace vosim {

double scalar_gradient_step(double theta, double gain, double Delta, double C, double dt) {
  return exp_euler_step(theta, gain * Delta * Delta, gain * Delta * C, dt);
}

VirtualOutputFilter::VirtualOutputFilter(double gamma, double epsilon, double y_v0)
    : gamma_(gamma), eps_(epsilon), yvh_(y_v0) {
  if (!(gamma > 0.0)) throw ConfigError("filter gain gamma must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("filter epsilon must be positive");
}

double VirtualOutputFilter::step(double S, double Y, double dt) {
  // In the y_v variable the flow is yvh' = gamma*S^2*(Y/(eps*S) - yvh); held S, Y.
  yvh_ = exp_euler_step(yvh_, gamma_ * S * S, gamma_ * S * Y / eps_, dt);
  return yvh_;
}

MixedRegression Eigen_lu_mix(const Eigen::MatrixXd& Phi, const Eigen::VectorXd& C) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Phi);
  const double det = lu.determinant();
  const Eigen::Index q = Phi.rows();
  MixedRegression out;
  out.Delta = det;
  if (lu.isInvertible()) {
    out.C = det * lu.solve(C);
    return out;
  }
  // Singular: build the adjugate entrywise from cofactors.
  Eigen::MatrixXd adj(q, q);
  Eigen::MatrixXd minor(q - 1, q - 1);
  for (Eigen::Index i = 0; i < q; ++i) {
    for (Eigen::Index j = 0; j < q; ++j) {
      Eigen::Index mr = 0;
      for (Eigen::Index r = 0; r < q; ++r) {
        if (r == i) continue;
        Eigen::Index mc = 0;
        for (Eigen::Index c = 0; c < q; ++c) {
          if (c == j) continue;
          minor(mr, mc) = Phi(r, c);
          ++mc;
        }
        ++mr;
      }
      const double cof = ((i + j) % 2 == 0 ? 1.0 : -1.0) * minor.determinant();
      adj(j, i) = cof;  // adjugate is the cofactor transpose
    }
  }
  out.C = adj * C;
  return out;
}

MixedRegression extend_mix(const Eigen::MatrixXd& Phi, const Eigen::VectorXd& C) {
  const Eigen::Index q = Phi.rows();
  if (Phi.cols() != q) throw ConfigError("extend_mix: Phi must be square");
  if (C.size() != q) throw ConfigError("extend_mix: C size must match Phi");
  if (q == 0) throw ConfigError("extend_mix: empty system");

  MixedRegression out;
  if (q == 1) {
    out.Delta = Phi(0, 0);
    out.C = C;
    return out;
  }
  if (q == 2) {
    out.Delta = Phi(0, 0) * Phi(1, 1) - Phi(0, 1) * Phi(1, 0);
    out.C.resize(2);
    out.C(0) = Phi(1, 1) * C(0) - Phi(0, 1) * C(1);
    out.C(1) = -Phi(1, 0) * C(0) + Phi(0, 0) * C(1);
    return out;
  }
  if (q == 3) {
    const double a = Phi(0, 0), b = Phi(0, 1), c = Phi(0, 2);
    const double d = Phi(1, 0), e = Phi(1, 1), f = Phi(1, 2);
    const double g = Phi(2, 0), h = Phi(2, 1), i = Phi(2, 2);
    out.Delta = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    Eigen::Matrix3d adj;
    adj << e * i - f * h, c * h - b * i, b * f - c * e,
           f * g - d * i, a * i - c * g, c * d - a * f,
           d * h - e * g, b * g - a * h, a * e - b * d;
    out.C = adj * C;
    return out;
  }
  return Eigen_lu_mix(Phi, C);
}

WindowDemod::WindowDemod(int n_periods, double epsilon, double dt)
    : eps_(epsilon), n_(n_periods) {
  if (n_periods < 1) throw ConfigError("window demod needs n_periods >= 1");
  if (!(epsilon > 0.0) || !(dt > 0.0)) throw ConfigError("window demod: bad epsilon or dt");
  const double span = n_periods * epsilon / dt;
  const double rounded = std::round(span);
  if (rounded < 4.0 || std::abs(span - rounded) > 1e-6 * span) {
    throw ConfigError("window demod: n_periods*epsilon must be a multiple of dt (>= 4 samples)");
  }
  ring_.assign(static_cast<size_t>(rounded), Sample{0.0, 0.0});
}

WindowDemod::Estimate WindowDemod::step(double S, double y) {
  if (count_ == ring_.size()) {
    const Sample& old = ring_[idx_];
    sum_S_ -= old.S;
    sum_SS_ -= old.S * old.S;
    sum_y_ -= old.y;
    sum_Sy_ -= old.S * old.y;
  } else {
    ++count_;
  }
  ring_[idx_] = Sample{S, y};
  idx_ = (idx_ + 1) % ring_.size();
  sum_S_ += S;
  sum_SS_ += S * S;
  sum_y_ += y;
  sum_Sy_ += S * y;

  est_ = Estimate{};
  if (count_ < ring_.size()) return est_;

  const double N = static_cast<double>(count_);
  const double denom = N * sum_SS_ - sum_S_ * sum_S_;
  // Excitation test: the centered second moment of S must be a sane fraction of
  // its raw second moment, otherwise the normal equations are ill-conditioned.
  if (!(denom > 1e-12 * (N * sum_SS_ + 1e-300))) {
    return est_;  // invalid: lost excitation
  }
  est_.theta2 = (N * sum_Sy_ - sum_S_ * sum_y_) / denom;
  est_.ybar = (sum_y_ - est_.theta2 * sum_S_) / N;
  est_.y_v = est_.theta2 / eps_;
  est_.valid = true;
  return est_;
}

}  // namespace vosim
