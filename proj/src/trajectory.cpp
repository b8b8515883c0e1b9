#include "vosim/trajectory.hpp"

#include <cstdio>
#include <fstream>

#include "vosim/errors.hpp"

namespace vosim {

Trajectory::Trajectory(std::vector<std::string> channels)
    : channels_(std::move(channels)) {
  if (channels_.empty()) throw ConfigError("trajectory needs at least one channel");
}

void Trajectory::add_row(const std::vector<double>& row) {
  if (row.size() != channels_.size()) {
    throw SimulationError("trajectory row size does not match channel count");
  }
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

bool Trajectory::has(const std::string& channel) const {
  for (const auto& c : channels_) {
    if (c == channel) return true;
  }
  return false;
}

size_t Trajectory::index_of(const std::string& channel) const {
  for (size_t i = 0; i < channels_.size(); ++i) {
    if (channels_[i] == channel) return i;
  }
  throw ConfigError("unknown trajectory channel: " + channel);
}

std::vector<double> Trajectory::column(const std::string& channel) const {
  const size_t c = index_of(channel);
  std::vector<double> out(rows_);
  for (size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
  return out;
}

std::string Trajectory::to_csv(const std::vector<std::string>& select,
                               size_t stride) const {
  if (stride == 0) throw ConfigError("csv stride must be >= 1");
  std::vector<size_t> cols;
  std::string header;
  const auto& names = select.empty() ? channels_ : select;
  for (const auto& n : names) {
    cols.push_back(index_of(n));
    if (!header.empty()) header += ',';
    header += n;
  }
  std::string out = header + "\n";
  out.reserve(out.size() + rows_ / stride * cols.size() * 20);
  char buf[40];
  for (size_t r = 0; r < rows_; r += stride) {
    for (size_t j = 0; j < cols.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", at(r, cols[j]));
      if (j) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void Trajectory::write_csv(const std::string& path,
                           const std::vector<std::string>& select,
                           size_t stride) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file: " + path);
  f << to_csv(select, stride);
  if (!f) throw ConfigError("failed writing output file: " + path);
}

}  // namespace vosim
