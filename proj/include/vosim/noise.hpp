#pragma once

#include <cstdint>
#include <random>

namespace vosim {

// Band-limited measurement noise surrogate: zero-mean Gaussian samples of
// variance power/sample_time, drawn once per hold interval and held constant
// in between. Gaussian draws use an explicit Box-Muller mapping on the raw
// mt19937_64 stream (both fully specified), so the sequence is identical
// across platforms and compilers.
class NoiseSource {
 public:
  NoiseSource(double power, double sample_time, uint64_t seed);

  // Noise value at step index k on a grid of spacing dt; redraws whenever a
  // new hold interval starts. Must be called with non-decreasing k.
  double at_step(uint64_t k, double dt);

  double sigma() const { return sigma_; }
  double sample_time() const { return sample_time_; }

  // Raw standard normal draw (advances the stream).
  double normal();

 private:
  double sigma_;
  double sample_time_;
  std::mt19937_64 gen_;
  uint64_t next_redraw_ = 0;
  double held_ = 0.0;
};

}  // namespace vosim
