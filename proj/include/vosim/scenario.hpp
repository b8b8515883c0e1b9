#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vosim/config.hpp"
#include "vosim/control.hpp"
#include "vosim/ems_models.hpp"
#include "vosim/observers.hpp"
#include "vosim/signals.hpp"

namespace vosim {

enum class ModelKind { MagLev, OptSw };
enum class ControllerKind { Constant, IdaPbc, Backstepping };
enum class ObserverKind { None, MagLevAdaptive, Electrical, OptSw };

struct RefParams {
  double low = 0.0;
  double high = 0.001;
  double t_start = 1.0;
  double period = 12.0;
  double duty = 0.29166666666666667;
  double ramp = 0.3;
};

// Fully validated run description. Built from a Config; every config key is
// consumed during the build so unknown keys fail.
struct Scenario {
  ModelKind model_kind = ModelKind::MagLev;
  MagLevParams maglev;
  OptSwParams optsw;

  Waveform waveform = Waveform::Sinusoid;
  std::vector<double> table;  // tabulated waveform samples
  double epsilon = 1.0 / 300.0;
  Eigen::VectorXd scaling;

  double gamma = 3.5e8;     // virtual-output filter gain
  int d_periods = 1;        // ripple-extractor delay in probing periods
  double yv_floor = 0.0;    // lower clamp applied before divisions
  double yv0 = 0.0;         // filter initial state

  int steps_per_epsilon = 100;
  double T = 10.0;
  Eigen::VectorXd x0;

  ControllerKind controller = ControllerKind::Constant;
  double u_constant = 0.0;
  IdaPbcController::Gains ida;
  BacksteppingController::Gains bs;
  bool use_R_hat = false;
  RefParams ref;

  ObserverKind observer = ObserverKind::None;
  MagLevAdaptiveObserver::Gains obs;
  double gamma_E = 1.0;  // electrical observer gain
  double gamma_Q = 1.0;  // optical-switch charge observer gain
  bool with_luenberger = false;

  double noise_power = 0.0;
  double noise_sample_time = 1e-3;
  uint64_t seed = 1;

  bool baseline_on = false;
  int baseline_n = 10;

  double adapt_settle_factor = 5.0;
  double lag_settle_factor = 8.0;

  double settle_time = 0.0;
  std::vector<std::string> out_channels;  // empty = all
  int stride = 1;

  double dt() const { return epsilon / steps_per_epsilon; }
};

// Expand model.preset into concrete defaults; explicit keys win.
void apply_preset(Config& cfg);
// Names understood by apply_preset.
std::vector<std::string> preset_names();

// Parse, default, validate; throws ConfigError on any problem.
Scenario build_scenario(Config& cfg);

}  // namespace vosim
