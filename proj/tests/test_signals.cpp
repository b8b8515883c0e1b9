#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "vosim/errors.hpp"
#include "vosim/signals.hpp"

using namespace vosim;

namespace {
Eigen::VectorXd one(double v) { return Eigen::VectorXd::Constant(1, v); }
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("sinusoid primitive: value at zero and periodicity") {
  ProbingSignal p(Waveform::Sinusoid, 0.01, one(1.0));
  CHECK(p.S_phase(0.0) == doctest::Approx(-1.0 / (2.0 * kPi)).epsilon(1e-15));
  // 1-periodic in phase, epsilon-periodic in time
  for (double tau : {0.13, 0.5, 0.77}) {
    CHECK(p.S_phase(tau) == doctest::Approx(p.S_phase(tau + 1.0)).epsilon(1e-14));
    CHECK(p.s_phase(tau) == doctest::Approx(p.s_phase(tau + 3.0)).epsilon(1e-12));
    CHECK(p.S(tau * 0.01) == doctest::Approx(p.S(tau * 0.01 + 0.01)).epsilon(1e-12));
  }
}

TEST_CASE("sinusoid primitive is the zero-mean antiderivative") {
  ProbingSignal p(Waveform::Sinusoid, 0.5, one(1.0));
  // finite differences of S against s
  const double h = 1e-6;
  for (double tau : {0.1, 0.33, 0.6, 0.95}) {
    const double dS = (p.S_phase(tau + h) - p.S_phase(tau - h)) / (2 * h);
    CHECK(dS == doctest::Approx(p.s_phase(tau)).epsilon(1e-6));
  }
  // zero mean over one period
  double acc = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) acc += p.S_phase((i + 0.5) / n);
  CHECK(std::abs(acc / n) < 1e-12);
}

TEST_CASE("sinusoid mean square energy per period") {
  ProbingSignal p(Waveform::Sinusoid, 1.0 / 300.0, one(1.0));
  CHECK(p.mean_square_S() == doctest::Approx(1.0 / (8.0 * kPi * kPi)).epsilon(1e-15));
  // integral of S^2 over any epsilon window equals eps * <S^2>: the
  // excitation level is uniform, not just on average
  const double eps = p.epsilon();
  for (double t0 : {0.0, 0.123 * eps, 0.77 * eps}) {
    double acc = 0.0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
      const double t = t0 + (i + 0.5) / n * eps;
      acc += p.S(t) * p.S(t) * eps / n;
    }
    CHECK(acc == doctest::Approx(eps / (8.0 * kPi * kPi)).epsilon(1e-6));
  }
}

TEST_CASE("square wave primitive is the zero-mean triangle") {
  ProbingSignal p(Waveform::Square, 0.02, one(1.0));
  CHECK(p.s_phase(0.1) == 1.0);
  CHECK(p.s_phase(0.6) == -1.0);
  CHECK(p.S_phase(0.0) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(p.S_phase(0.25) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p.S_phase(0.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(p.S_phase(0.75) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p.mean_square_S() == doctest::Approx(1.0 / 48.0).epsilon(1e-15));
  // zero mean
  double acc = 0.0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) acc += p.S_phase((i + 0.5) / n);
  CHECK(std::abs(acc / n) < 1e-12);
}

TEST_CASE("tabulated waveform matches the analytic sinusoid") {
  const int n = 512;
  std::vector<double> table(n);
  for (int i = 0; i < n; ++i) table[i] = std::sin(2.0 * kPi * i / n);
  ProbingSignal tab(table, 0.01, one(1.0));
  ProbingSignal ana(Waveform::Sinusoid, 0.01, one(1.0));
  for (double tau : {0.0, 0.111, 0.25, 0.499, 0.5, 0.832, 0.999}) {
    CHECK(tab.s_phase(tau) == doctest::Approx(ana.s_phase(tau)).epsilon(1e-4));
    CHECK(tab.S_phase(tau) == doctest::Approx(ana.S_phase(tau)).epsilon(1e-4));
  }
  CHECK(tab.mean_square_S() ==
        doctest::Approx(1.0 / (8.0 * kPi * kPi)).epsilon(1e-4));
}

TEST_CASE("tabulated waveform is mean-corrected") {
  // biased table: the injected waveform and its primitive must still be zero mean
  std::vector<double> table = {2.0, 3.0, 2.5, 1.0, 0.5, 1.5, 2.0, 3.5};
  ProbingSignal p(table, 0.1, one(1.0));
  double ms = 0.0, mS = 0.0;
  const int n = 80000;
  for (int i = 0; i < n; ++i) {
    ms += p.s_phase((i + 0.5) / n);
    mS += p.S_phase((i + 0.5) / n);
  }
  CHECK(std::abs(ms / n) < 1e-10);
  CHECK(std::abs(mS / n) < 1e-10);
  // primitive consistency for the interpolated table
  const double h = 1e-7;
  for (double tau : {0.07, 0.31, 0.62, 0.93}) {
    const double dS = (p.S_phase(tau + h) - p.S_phase(tau - h)) / (2 * h);
    CHECK(dS == doctest::Approx(p.s_phase(tau)).epsilon(1e-5));
  }
}

TEST_CASE("injection reduces to the base input when scaling is zero") {
  ProbingSignal p(Waveform::Sinusoid, 0.01, one(0.0));
  for (double t : {0.0, 0.0012, 0.005}) {
    CHECK(p.inject(t)(0) == 0.0);
  }
}

TEST_CASE("injection scales the waveform") {
  ProbingSignal p(Waveform::Square, 0.01, one(1.5));
  CHECK(p.inject(0.001)(0) == doctest::Approx(1.5));
  CHECK(p.inject(0.006)(0) == doctest::Approx(-1.5));
}

TEST_CASE("probing validation rejects bad parameters") {
  CHECK_THROWS_AS(ProbingSignal(Waveform::Sinusoid, 0.0, one(1.0)), ConfigError);
  CHECK_THROWS_AS(ProbingSignal(Waveform::Sinusoid, 1.0, one(1.0)), ConfigError);
  CHECK_THROWS_AS(ProbingSignal(Waveform::Sinusoid, -0.1, one(1.0)), ConfigError);
  CHECK_THROWS_AS(ProbingSignal(Waveform::Tabulated, 0.01, one(1.0)), ConfigError);
  CHECK_THROWS_AS(ProbingSignal(std::vector<double>{1.0, 2.0}, 0.01, one(1.0)),
                  ConfigError);
  CHECK_THROWS_AS(ProbingSignal(Waveform::Sinusoid, 0.01,
                                one(std::numeric_limits<double>::quiet_NaN())),
                  ConfigError);
}
