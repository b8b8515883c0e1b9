#pragma once

#include <map>
#include <string>
#include <vector>

#include "vosim/trajectory.hpp"

namespace vosim {

// Summary statistics of one channel over a time window.
struct ChannelStats {
  double sup_abs = 0.0;  // max |v|
  double rms = 0.0;      // sqrt(mean v^2)
  double bias = 0.0;     // mean v
  double jitter = 0.0;   // std about the mean
  size_t count = 0;
};

// Stats over rows with t in [t0, t1]; throws if the window is empty.
ChannelStats window_stats(const Trajectory& traj, const std::string& channel,
                          double t0, double t1);

// Smallest sliding-window mean square of a channel: min over start times of
// (1/window) * integral of v^2, trapezoid on the grid. Used as the
// persistence-of-excitation diagnostic; near zero means lost excitation.
double min_window_mean_square(const Trajectory& traj, const std::string& channel,
                              double window);

// Per-channel stats for every err_* channel plus excitation diagnostics,
// evaluated on [settle, end]. Key layout: "<channel>.<stat>".
std::map<std::string, double> metrics_report(const Trajectory& traj, double settle);

}  // namespace vosim
