#include "vosim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vosim/errors.hpp"

namespace vosim {

ChannelStats window_stats(const Trajectory& traj, const std::string& channel,
                          double t0, double t1) {
  const size_t ct = traj.index_of("t");
  const size_t cv = traj.index_of(channel);
  ChannelStats st;
  double sum = 0.0, sumsq = 0.0;
  for (size_t r = 0; r < traj.rows(); ++r) {
    const double t = traj.at(r, ct);
    if (t < t0 || t > t1) continue;
    const double v = traj.at(r, cv);
    st.sup_abs = std::max(st.sup_abs, std::abs(v));
    sum += v;
    sumsq += v * v;
    ++st.count;
  }
  if (st.count == 0) throw ConfigError("metrics window [" + std::to_string(t0) + ", " +
                                       std::to_string(t1) + "] contains no samples");
  const double n = static_cast<double>(st.count);
  st.rms = std::sqrt(sumsq / n);
  st.bias = sum / n;
  const double var = std::max(0.0, sumsq / n - st.bias * st.bias);
  st.jitter = std::sqrt(var);
  return st;
}

double min_window_mean_square(const Trajectory& traj, const std::string& channel,
                              double window) {
  const size_t ct = traj.index_of("t");
  const size_t cv = traj.index_of(channel);
  if (traj.rows() < 2) throw ConfigError("trajectory too short for excitation metric");
  const double dt = traj.at(1, ct) - traj.at(0, ct);
  const auto W = static_cast<size_t>(std::llround(window / dt));
  if (W < 2 || W >= traj.rows()) {
    throw ConfigError("excitation window does not fit the trajectory");
  }
  // running trapezoid integral of v^2
  std::vector<double> chi(traj.rows(), 0.0);
  for (size_t r = 1; r < traj.rows(); ++r) {
    const double a = traj.at(r - 1, cv), b = traj.at(r, cv);
    chi[r] = chi[r - 1] + 0.5 * dt * (a * a + b * b);
  }
  double best = std::numeric_limits<double>::infinity();
  for (size_t r = W; r < traj.rows(); ++r) {
    best = std::min(best, (chi[r] - chi[r - W]) / window);
  }
  return best;
}

std::map<std::string, double> metrics_report(const Trajectory& traj, double settle) {
  const size_t ct = traj.index_of("t");
  const double t_end = traj.at(traj.rows() - 1, ct);
  std::map<std::string, double> out;
  for (const auto& ch : traj.channels()) {
    if (ch.rfind("err_", 0) != 0) continue;
    const ChannelStats st = window_stats(traj, ch, settle, t_end);
    out[ch + ".sup"] = st.sup_abs;
    out[ch + ".rms"] = st.rms;
    out[ch + ".bias"] = st.bias;
    out[ch + ".jitter"] = st.jitter;
  }
  return out;
}

}  // namespace vosim
