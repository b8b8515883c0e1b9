#include "vosim/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "vosim/errors.hpp"

namespace vosim {
namespace {

const std::map<std::string, std::map<std::string, std::string>>& presets() {
  static const std::map<std::string, std::map<std::string, std::string>> p = {
      {"maglev-sim",
       {
           {"model.kind", "maglev"},
           {"model.m", "0.0844"},
           {"model.G", "9.81"},
           {"model.R", "2.52"},
           {"model.c", "0.005"},
           {"model.k", "0.0064042"},
           {"probe.shape", "sinusoid"},
           {"probe.epsilon", "1/300"},
           {"probe.scaling", "1"},
           {"filter.gamma", "3.5e8"},
           {"filter.d_periods", "1"},
           {"filter.yv_floor", "0.039"},
           {"sim.T", "10"},
           {"sim.steps_per_epsilon", "100"},
           {"init.mode", "equilibrium"},
           {"init.q", "0"},
           {"controller.kind", "ida-pbc"},
           {"controller.Kp", "200.7"},
           {"controller.alpha", "33.4"},
           {"controller.use_R_hat", "true"},
           {"reference.low", "0"},
           {"reference.high", "0.001"},
           {"reference.t_start", "1"},
           {"reference.period", "12"},
           {"reference.duty", "0.29166666666666667"},
           {"reference.ramp", "0.3"},
           {"observer.kind", "maglev-adaptive"},
           {"observer.a", "500"},
           {"observer.gamma_R", "500"},
           {"observer.gamma_lambda", "8000"},
           {"observer.gamma_p", "30"},
           {"observer.R_hat0", "2"},
           {"observer.R_min", "1"},
           {"observer.R_max", "5"},
           {"noise.power", "1e-10"},
           {"noise.sample_time", "1e-3"},
           {"noise.seed", "1"},
           {"metrics.settle_time", "5"},
       }},
      {"maglev-exp",
       {
           {"model.kind", "maglev"},
           {"model.m", "0.0844"},
           {"model.G", "9.81"},
           {"model.R", "10.615"},
           {"model.c", "0.0079"},
           {"model.k", "0.04995"},
           {"probe.shape", "sinusoid"},
           {"probe.epsilon", "1/33"},
           {"probe.scaling", "1.5"},
           {"filter.gamma", "4e5"},
           {"filter.d_periods", "10"},
           {"filter.yv_floor", "0.0079"},
           {"sim.T", "10"},
           {"sim.steps_per_epsilon", "100"},
           {"init.mode", "equilibrium"},
           {"init.q", "0"},
           {"controller.kind", "backstepping"},
           {"controller.gamma1", "340"},
           {"controller.gamma2", "3"},
           {"controller.Ki", "1"},
           {"controller.use_R_hat", "true"},
           {"reference.low", "0"},
           {"reference.high", "0.001"},
           {"reference.t_start", "1"},
           {"reference.period", "12"},
           {"reference.duty", "0.29166666666666667"},
           {"reference.ramp", "0.3"},
           {"observer.kind", "maglev-adaptive"},
           {"observer.a", "10"},
           {"observer.gamma_R", "50"},
           {"observer.gamma_lambda", "8000"},
           {"observer.gamma_p", "20"},
           {"observer.R_hat0", "8"},
           {"observer.R_min", "2"},
           {"observer.R_max", "20"},
           {"noise.power", "0"},
           {"noise.sample_time", "1e-3"},
           {"noise.seed", "1"},
           {"metrics.settle_time", "5"},
       }},
      {"optsw-sim",
       {
           {"model.kind", "optsw"},
           {"model.m", "1e-4"},
           {"model.a1", "20"},
           {"model.a2", "2e6"},
           {"model.c0", "1e-3"},
           {"model.c1", "1e-3"},
           {"model.R_C", "50"},
           {"model.R_M", "0.02"},
           {"probe.shape", "sinusoid"},
           {"probe.epsilon", "2e-5"},
           {"probe.scaling", "1"},
           {"filter.gamma", "2e5"},
           {"filter.d_periods", "1"},
           {"filter.yv_floor", "500"},
           {"sim.T", "0.25"},
           {"sim.steps_per_epsilon", "100"},
           {"init.mode", "equilibrium"},
           {"controller.kind", "constant"},
           {"controller.u", "6.3245553203367585"},
           {"observer.kind", "optsw"},
           {"observer.gamma_Q", "2e-5"},
           {"noise.power", "0"},
           {"noise.sample_time", "1e-3"},
           {"noise.seed", "1"},
           {"metrics.settle_time", "0.15"},
       }},
  };
  return p;
}

std::vector<std::string> split_csv_strings(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(v);
  while (std::getline(ss, item, ',')) {
    size_t b = item.find_first_not_of(" \t");
    size_t e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

uint64_t parse_seed(const std::string& v) {
  // strtoull would wrap a leading minus, so reject it explicitly
  char* end = nullptr;
  const unsigned long long s = std::strtoull(v.c_str(), &end, 10);
  if (v.find('-') != std::string::npos || end == v.c_str() || *end != '\0') {
    throw ConfigError("noise.seed must be a non-negative integer, got '" + v + "'");
  }
  return s;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : presets()) out.push_back(k);
  return out;
}

void apply_preset(Config& cfg) {
  if (!cfg.has("model.preset")) return;
  const std::string name = cfg.get_string("model.preset");
  const auto it = presets().find(name);
  if (it == presets().end()) {
    std::string known;
    for (const auto& n : preset_names()) {
      if (!known.empty()) known += ", ";
      known += n;
    }
    throw ConfigError("unknown model.preset '" + name + "' (known: " + known + ")");
  }
  for (const auto& [k, v] : it->second) cfg.set_default(k, v);
}

Scenario build_scenario(Config& cfg) {
  apply_preset(cfg);
  Scenario sc;

  // ---- model ----
  const std::string kind = cfg.get_string("model.kind");
  if (kind == "maglev") {
    sc.model_kind = ModelKind::MagLev;
    sc.maglev.m = cfg.get_double("model.m", sc.maglev.m);
    sc.maglev.G = cfg.get_double("model.G", sc.maglev.G);
    sc.maglev.R = cfg.get_double("model.R", sc.maglev.R);
    sc.maglev.c = cfg.get_double("model.c", sc.maglev.c);
    sc.maglev.k = cfg.get_double("model.k", sc.maglev.k);
    sc.maglev.guard_margin = cfg.get_double("model.guard_margin", sc.maglev.guard_margin);
  } else if (kind == "optsw") {
    sc.model_kind = ModelKind::OptSw;
    sc.optsw.m = cfg.get_double("model.m", sc.optsw.m);
    sc.optsw.a1 = cfg.get_double("model.a1", sc.optsw.a1);
    sc.optsw.a2 = cfg.get_double("model.a2", sc.optsw.a2);
    sc.optsw.c0 = cfg.get_double("model.c0", sc.optsw.c0);
    sc.optsw.c1 = cfg.get_double("model.c1", sc.optsw.c1);
    sc.optsw.R_C = cfg.get_double("model.R_C", sc.optsw.R_C);
    sc.optsw.R_M = cfg.get_double("model.R_M", sc.optsw.R_M);
    sc.optsw.guard_margin = cfg.get_double("model.guard_margin", sc.optsw.guard_margin);
  } else {
    throw ConfigError("model.kind must be 'maglev' or 'optsw', got '" + kind + "'");
  }

  // ---- probing ----
  const std::string shape = cfg.get_string("probe.shape", "sinusoid");
  if (shape == "sinusoid") {
    sc.waveform = Waveform::Sinusoid;
  } else if (shape == "square") {
    sc.waveform = Waveform::Square;
  } else if (shape == "tabulated") {
    sc.waveform = Waveform::Tabulated;
    sc.table = cfg.get_double_list("probe.table");
  } else {
    throw ConfigError("probe.shape must be sinusoid, square, or tabulated");
  }
  sc.epsilon = cfg.get_double("probe.epsilon");
  const std::vector<double> scal = cfg.get_double_list("probe.scaling");
  sc.scaling = Eigen::Map<const Eigen::VectorXd>(scal.data(), scal.size());
  if (sc.scaling.size() != 1) {
    throw ConfigError("probe.scaling must have exactly one entry for these models");
  }

  // ---- filter ----
  sc.gamma = cfg.get_double("filter.gamma");
  sc.d_periods = cfg.get_int("filter.d_periods", 1);
  if (sc.d_periods < 1) throw ConfigError("filter.d_periods must be >= 1");
  sc.yv_floor = cfg.get_double("filter.yv_floor", 0.0);
  sc.yv0 = cfg.get_double("filter.yv0", 0.0);

  // ---- integration ----
  sc.steps_per_epsilon = cfg.get_int("sim.steps_per_epsilon", 100);
  if (sc.steps_per_epsilon < 10 || sc.steps_per_epsilon % 10 != 0) {
    throw ConfigError("sim.steps_per_epsilon must be a positive multiple of 10");
  }
  sc.T = cfg.get_double("sim.T");
  if (!(sc.T > 0)) throw ConfigError("sim.T must be positive");

  // ---- controller (parsed before init: equilibrium start may need u) ----
  const std::string ckind = cfg.get_string("controller.kind", "constant");
  if (ckind == "constant") {
    sc.controller = ControllerKind::Constant;
  } else if (ckind == "ida-pbc") {
    sc.controller = ControllerKind::IdaPbc;
  } else if (ckind == "backstepping") {
    sc.controller = ControllerKind::Backstepping;
  } else {
    throw ConfigError("controller.kind must be constant, ida-pbc, or backstepping");
  }
  sc.u_constant = cfg.get_double("controller.u", 0.0);
  sc.ida.Kp = cfg.get_double("controller.Kp", sc.ida.Kp);
  sc.ida.alpha = cfg.get_double("controller.alpha", sc.ida.alpha);
  sc.ida.r_sign = cfg.get_double("controller.r_sign", 1.0);
  sc.bs.gamma1 = cfg.get_double("controller.gamma1", sc.bs.gamma1);
  sc.bs.gamma2 = cfg.get_double("controller.gamma2", sc.bs.gamma2);
  sc.bs.Ki = cfg.get_double("controller.Ki", sc.bs.Ki);
  sc.use_R_hat = cfg.get_bool("controller.use_R_hat", false);
  if (sc.model_kind == ModelKind::OptSw && sc.controller != ControllerKind::Constant) {
    throw ConfigError("optsw supports only controller.kind = constant");
  }

  sc.ref.low = cfg.get_double("reference.low", sc.ref.low);
  sc.ref.high = cfg.get_double("reference.high", sc.ref.high);
  sc.ref.t_start = cfg.get_double("reference.t_start", sc.ref.t_start);
  sc.ref.period = cfg.get_double("reference.period", sc.ref.period);
  sc.ref.duty = cfg.get_double("reference.duty", sc.ref.duty);
  sc.ref.ramp = cfg.get_double("reference.ramp", sc.ref.ramp);
  // validate eagerly even if the controller ignores the reference
  (void)PulseTrain(sc.ref.low, sc.ref.high, sc.ref.t_start, sc.ref.period, sc.ref.duty,
                   sc.ref.ramp);

  // ---- initial state ----
  const std::string imode = cfg.get_string("init.mode", "equilibrium");
  const double init_q = cfg.get_double("init.q", 0.0);
  if (imode == "explicit") {
    const std::vector<double> x0 = cfg.get_double_list("init.x0");
    if (x0.size() != 3) throw ConfigError("init.x0 must have 3 entries");
    sc.x0 = Eigen::Map<const Eigen::VectorXd>(x0.data(), 3);
  } else if (imode == "equilibrium") {
    if (sc.model_kind == ModelKind::MagLev) {
      sc.x0 = MagLevModel(sc.maglev).equilibrium(init_q).first;
    } else {
      sc.x0 = OptSwModel(sc.optsw).equilibrium(sc.u_constant).first;
    }
  } else {
    throw ConfigError("init.mode must be 'equilibrium' or 'explicit'");
  }

  // ---- observer ----
  const std::string okind = cfg.get_string("observer.kind", "none");
  if (okind == "none") {
    sc.observer = ObserverKind::None;
  } else if (okind == "maglev-adaptive") {
    sc.observer = ObserverKind::MagLevAdaptive;
    if (sc.model_kind != ModelKind::MagLev) {
      throw ConfigError("observer.kind maglev-adaptive requires model.kind maglev");
    }
  } else if (okind == "electrical") {
    sc.observer = ObserverKind::Electrical;
  } else if (okind == "optsw") {
    sc.observer = ObserverKind::OptSw;
    if (sc.model_kind != ModelKind::OptSw) {
      throw ConfigError("observer.kind optsw requires model.kind optsw");
    }
  } else {
    throw ConfigError("observer.kind must be none, maglev-adaptive, electrical, or optsw");
  }
  sc.obs.a = cfg.get_double("observer.a", sc.obs.a);
  sc.obs.gamma_R = cfg.get_double("observer.gamma_R", sc.obs.gamma_R);
  sc.obs.gamma_lambda = cfg.get_double("observer.gamma_lambda", sc.obs.gamma_lambda);
  sc.obs.gamma_p = cfg.get_double("observer.gamma_p", sc.obs.gamma_p);
  sc.obs.R_hat0 = cfg.get_double("observer.R_hat0", sc.obs.R_hat0);
  sc.obs.R_min = cfg.get_double("observer.R_min", sc.obs.R_min);
  sc.obs.R_max = cfg.get_double("observer.R_max", sc.obs.R_max);
  sc.obs.l1 = cfg.get_double("observer.l1", sc.obs.l1);
  sc.obs.l2 = cfg.get_double("observer.l2", sc.obs.l2);
  sc.with_luenberger = cfg.get_bool("observer.with_luenberger", false);
  sc.gamma_E = cfg.get_double("observer.gamma_E", 1.0);
  sc.gamma_Q = cfg.get_double("observer.gamma_Q", 1.0);

  const bool divides_by_yv =
      sc.observer == ObserverKind::MagLevAdaptive || sc.observer == ObserverKind::OptSw;
  if (divides_by_yv && !(sc.yv_floor > 0)) {
    throw ConfigError("observer.kind " + okind + " requires filter.yv_floor > 0");
  }
  if (sc.use_R_hat && sc.observer != ObserverKind::MagLevAdaptive) {
    throw ConfigError("controller.use_R_hat needs observer.kind maglev-adaptive");
  }

  // ---- noise ----
  sc.noise_power = cfg.get_double("noise.power", 0.0);
  sc.noise_sample_time = cfg.get_double("noise.sample_time", 1e-3);
  sc.seed = parse_seed(cfg.get_string("noise.seed", "1"));
  if (sc.noise_power < 0) throw ConfigError("noise.power must be non-negative");

  // ---- baseline ----
  sc.baseline_on = cfg.get_bool("baseline.enabled", false);
  sc.baseline_n = cfg.get_int("baseline.n_periods", 10);
  if (sc.baseline_n < 1) throw ConfigError("baseline.n_periods must be >= 1");

  // ---- gating ----
  sc.adapt_settle_factor = cfg.get_double("gate.adapt_settle_factor", 5.0);
  sc.lag_settle_factor = cfg.get_double("gate.lag_settle_factor", 8.0);
  if (sc.adapt_settle_factor < 0 || sc.lag_settle_factor < 0) {
    throw ConfigError("gate settle factors must be non-negative");
  }

  // ---- metrics / output ----
  sc.settle_time = cfg.get_double("metrics.settle_time", 0.5 * sc.T);
  if (sc.settle_time < 0 || sc.settle_time >= sc.T) {
    throw ConfigError("metrics.settle_time must lie in [0, sim.T)");
  }
  if (cfg.has("output.channels")) {
    sc.out_channels = split_csv_strings(cfg.get_string("output.channels"));
  }
  sc.stride = cfg.get_int("output.stride", 1);
  if (sc.stride < 1) throw ConfigError("output.stride must be >= 1");

  // ---- cross checks ----
  const double warm = 2.0 * sc.d_periods * sc.epsilon;
  if (sc.T <= warm) {
    throw ConfigError("sim.T must exceed the operator warm-up time 2*d = " +
                      std::to_string(warm));
  }
  // validate probing construction eagerly
  if (sc.waveform == Waveform::Tabulated) {
    (void)ProbingSignal(sc.table, sc.epsilon, sc.scaling);
  } else {
    (void)ProbingSignal(sc.waveform, sc.epsilon, sc.scaling);
  }

  cfg.check_all_consumed();
  return sc;
}

}  // namespace vosim
