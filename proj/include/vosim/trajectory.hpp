#pragma once

#include <string>
#include <vector>

namespace vosim {

// Column-addressed record of a run on the fixed time grid. Rows are appended
// with one value per channel; CSV output is byte-deterministic (17 significant
// digits, fixed channel order).
class Trajectory {
 public:
  explicit Trajectory(std::vector<std::string> channels);

  void add_row(const std::vector<double>& row);
  size_t rows() const { return rows_; }
  size_t cols() const { return channels_.size(); }
  const std::vector<std::string>& channels() const { return channels_; }

  bool has(const std::string& channel) const;
  size_t index_of(const std::string& channel) const;  // throws if missing
  double at(size_t row, size_t col) const { return data_[row * cols() + col]; }
  double at(size_t row, const std::string& channel) const {
    return at(row, index_of(channel));
  }

  // All rows of one channel, in time order.
  std::vector<double> column(const std::string& channel) const;

  // CSV with a header line; `select` empty means all channels. stride > 1
  // thins rows (the first row is always kept).
  std::string to_csv(const std::vector<std::string>& select = {}, size_t stride = 1) const;
  void write_csv(const std::string& path, const std::vector<std::string>& select = {},
                 size_t stride = 1) const;

 private:
  std::vector<std::string> channels_;
  std::vector<double> data_;
  size_t rows_ = 0;
};

}  // namespace vosim
