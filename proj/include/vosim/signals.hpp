#pragma once

#include <vector>

#include <Eigen/Dense>

namespace vosim {

enum class Waveform { Sinusoid, Square, Tabulated };

// Probing signal u_inj(t) = s(t/eps) * scaling, where s is a 1-periodic
// zero-mean unit waveform, plus its zero-mean primitive S(t) = S0(t/eps).
// S0' = s, <S0> = 0 over one period; S carries the demodulation phase used
// by the virtual-output filter.
class ProbingSignal {
 public:
  ProbingSignal(Waveform shape, double epsilon, Eigen::VectorXd scaling);
  // Tabulated waveform: samples of one period, uniformly spaced, first sample
  // at phase 0 (the last point wraps to the first). The table is mean-corrected
  // internally so the injected waveform has zero mean.
  ProbingSignal(std::vector<double> table, double epsilon, Eigen::VectorXd scaling);

  // Waveform value at phase tau (any real, reduced mod 1).
  double s_phase(double tau) const;
  // Zero-mean primitive at phase tau.
  double S_phase(double tau) const;

  double s(double t) const { return s_phase(t / eps_); }
  double S(double t) const { return S_phase(t / eps_); }

  // Injected input vector s(t/eps) * scaling.
  Eigen::VectorXd inject(double t) const { return s(t) * scaling_; }

  double epsilon() const { return eps_; }
  const Eigen::VectorXd& scaling() const { return scaling_; }
  Waveform shape() const { return shape_; }

  // <S0^2> over one period; sets the filter's mean decay rate gamma*<S0^2>.
  double mean_square_S() const { return mean_square_S_; }

 private:
  void build_tabulated();

  Waveform shape_;
  double eps_;
  Eigen::VectorXd scaling_;
  double mean_square_S_ = 0.0;

  // Tabulated form: mean-corrected samples s_i at phases i/n, primitive values
  // P_i at segment starts, and the constant removed from P to zero its mean.
  std::vector<double> tab_s_;
  std::vector<double> tab_P_;
};

}  // namespace vosim
