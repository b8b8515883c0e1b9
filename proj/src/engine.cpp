#include "vosim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <sstream>

#include "vosim/drem.hpp"
#include "vosim/errors.hpp"
#include "vosim/ltv_ops.hpp"
#include "vosim/noise.hpp"
#include "vosim/rk4.hpp"

namespace vosim {
namespace {

void require_finite(double v, const char* what, double t) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "non-finite " << what << " at t = " << t;
    throw SimulationError(os.str());
  }
}

}  // namespace

RunResult run_scenario(const Scenario& sc) {
  const double dt = sc.dt();
  const double eps = sc.epsilon;
  const double b = sc.scaling(0);

  std::unique_ptr<EmsModel> model;
  if (sc.model_kind == ModelKind::MagLev) {
    model = std::make_unique<MagLevModel>(sc.maglev);
  } else {
    model = std::make_unique<OptSwModel>(sc.optsw);
  }

  const ProbingSignal probe =
      sc.waveform == Waveform::Tabulated
          ? ProbingSignal(sc.table, eps, sc.scaling)
          : ProbingSignal(sc.waveform, eps, sc.scaling);

  const double d = sc.d_periods * eps;
  DelayLine delay(d, dt);
  WindowedMean wmean(2.0 * d, dt);
  VirtualOutputFilter filter(sc.gamma, eps, sc.yv0);
  NoiseSource noise(sc.noise_power, sc.noise_sample_time, sc.seed);

  std::optional<WindowDemod> baseline;
  if (sc.baseline_on) baseline.emplace(sc.baseline_n, eps, dt);

  std::optional<IdaPbcController> ida;
  std::optional<BacksteppingController> bs;
  std::optional<PulseTrain> ref;
  if (sc.controller == ControllerKind::IdaPbc) {
    ida.emplace(sc.maglev, sc.ida);
  } else if (sc.controller == ControllerKind::Backstepping) {
    bs.emplace(sc.maglev, sc.bs, dt);
  }
  if (sc.controller != ControllerKind::Constant) {
    ref.emplace(sc.ref.low, sc.ref.high, sc.ref.t_start, sc.ref.period, sc.ref.duty,
                sc.ref.ramp);
  }

  std::optional<MagLevAdaptiveObserver> mlobs;
  std::optional<ElectricalObserver> eobs;
  std::optional<OptSwObserver> oobs;
  if (sc.observer == ObserverKind::MagLevAdaptive) {
    mlobs.emplace(sc.maglev, sc.obs, b, dt);
  } else if (sc.observer == ObserverKind::Electrical) {
    eobs.emplace(model->electrical_port(sc.scaling), sc.gamma_E,
                 Eigen::VectorXd::Zero(1));
  } else if (sc.observer == ObserverKind::OptSw) {
    oobs.emplace(sc.optsw, sc.gamma_Q, b, dt);
  }

  // staged gating: operators fill by warm_step; the filter then needs
  // adapt_settle_factor of its own time constants before its output is
  // trustworthy; the resistance identifier additionally waits for its lags
  const auto nsteps = static_cast<size_t>(std::llround(sc.T / dt));
  const size_t warm_step = 2 * static_cast<size_t>(sc.d_periods) * sc.steps_per_epsilon;
  const double tau_f = 1.0 / filter.mean_rate(probe.mean_square_S());
  const size_t adapt_step =
      warm_step + static_cast<size_t>(std::ceil(sc.adapt_settle_factor * tau_f / dt));
  size_t r_step = adapt_step;
  if (sc.observer == ObserverKind::MagLevAdaptive) {
    r_step += static_cast<size_t>(std::ceil(sc.lag_settle_factor / sc.obs.a / dt));
  }
  if (sc.observer != ObserverKind::None && adapt_step >= nsteps) {
    throw ConfigError(
        "observers never unfreeze: sim.T is shorter than warm-up plus filter settling");
  }

  // ---- channel layout ----
  std::vector<std::string> ch = {"t"};
  for (const auto& n : model->state_names()) ch.push_back(n);
  ch.insert(ch.end(), {"y", "y_clean", "u", "u_C", "s", "S", "Y", "yv_true", "yv_hat",
                       "yv_used", "warm", "adapt_on", "err_yv"});
  if (ref) ch.insert(ch.end(), {"q_star", "err_track"});
  if (mlobs) {
    ch.insert(ch.end(), {"R_hat", "lambda_hat", "q_hat", "p_hat", "z_kkl", "phi_R",
                         "r_adapt_on", "err_R", "err_lambda", "err_q", "err_p"});
    if (sc.with_luenberger) ch.insert(ch.end(), {"x2_lb", "p_lb", "err_p_lb"});
  }
  if (eobs) {
    const char* nm = sc.model_kind == ModelKind::MagLev ? "lambda_hat" : "Q_hat";
    const char* en = sc.model_kind == ModelKind::MagLev ? "err_lambda" : "err_Q";
    ch.insert(ch.end(), {nm, en});
  }
  if (oobs) ch.insert(ch.end(), {"Q_hat", "q_hat", "p_hat", "err_Q", "err_q", "err_p"});
  if (baseline) ch.insert(ch.end(), {"bl_ybar", "bl_yv", "bl_valid", "err_yv_bl"});

  Trajectory traj(ch);
  std::vector<double> row(ch.size());

  Eigen::VectorXd x = sc.x0;
  Eigen::VectorXd u_vec(1);
  bool preloaded = false;

  for (size_t k = 0; k <= nsteps; ++k) {
    const double t = static_cast<double>(k) * dt;
    model->check_admissible(x, t);
    require_finite(filter.y_v_hat(), "filter state", t);

    const double y_clean = model->output(x)(0);
    const double y = y_clean + noise.at_step(k, dt);
    const double Y = delay.step(y) - wmean.step(y);
    const double S = probe.S(t);
    const bool warm = k >= warm_step;
    const bool adapt = k >= adapt_step;
    const bool r_adapt = k >= r_step;

    WindowDemod::Estimate bl;
    if (baseline) bl = baseline->step(S, y);

    const double yv_hat = filter.y_v_hat();
    const double yv_used = std::max(yv_hat, sc.yv_floor);
    const double w = yv_used / b;  // normalized virtual output

    // observer outputs at this tick (pre-update states)
    double R_fb = sc.model_kind == ModelKind::MagLev ? sc.maglev.R : 0.0;
    if (mlobs) {
      require_finite(mlobs->R_hat(), "resistance estimate", t);
      require_finite(mlobs->lambda_hat(), "flux estimate", t);
      if (sc.use_R_hat) R_fb = mlobs->R_hat();
    }

    const double q_star = ref ? ref->eval(t) : 0.0;
    double u_C = sc.u_constant;
    if (ida) {
      u_C = ida->u(x, q_star, R_fb);
    } else if (bs) {
      u_C = bs->u(x, q_star, R_fb);
    }
    require_finite(u_C, "control input", t);
    const double u = u_C + probe.s(t) * b;
    u_vec(0) = u;

    // ---- log row ----
    const double yv_true = model->virtual_output(x, sc.scaling)(0);
    size_t c = 0;
    row[c++] = t;
    for (int i = 0; i < model->state_dim(); ++i) row[c++] = x(i);
    row[c++] = y;
    row[c++] = y_clean;
    row[c++] = u;
    row[c++] = u_C;
    row[c++] = probe.s(t);
    row[c++] = S;
    row[c++] = Y;
    row[c++] = yv_true;
    row[c++] = yv_hat;
    row[c++] = yv_used;
    row[c++] = warm ? 1.0 : 0.0;
    row[c++] = adapt ? 1.0 : 0.0;
    row[c++] = yv_hat - yv_true;
    if (ref) {
      row[c++] = q_star;
      row[c++] = x(1) - q_star;
    }
    if (mlobs) {
      row[c++] = mlobs->R_hat();
      row[c++] = mlobs->lambda_hat();
      row[c++] = mlobs->q_hat(w);
      row[c++] = mlobs->p_hat(w);
      row[c++] = mlobs->z();
      row[c++] = mlobs->phi_R();
      row[c++] = r_adapt ? 1.0 : 0.0;
      row[c++] = mlobs->R_hat() - sc.maglev.R;
      row[c++] = mlobs->lambda_hat() - x(0);
      row[c++] = mlobs->q_hat(w) - x(1);
      row[c++] = mlobs->p_hat(w) - x(2);
      if (sc.with_luenberger) {
        row[c++] = mlobs->x2_hat_luenberger();
        row[c++] = mlobs->p_hat_luenberger();
        row[c++] = mlobs->p_hat_luenberger() - x(2);
      }
    }
    if (eobs) {
      const double xh = eobs->x_E_hat()(0);
      row[c++] = xh;
      row[c++] = xh - x(0);
    }
    if (oobs) {
      row[c++] = oobs->Q_hat();
      row[c++] = oobs->q_hat(yv_used);
      row[c++] = oobs->p_hat();
      row[c++] = oobs->Q_hat() - x(0);
      row[c++] = oobs->q_hat(yv_used) - x(1);
      row[c++] = oobs->p_hat() - x(2);
    }
    if (baseline) {
      row[c++] = bl.ybar;
      row[c++] = bl.y_v;
      row[c++] = bl.valid ? 1.0 : 0.0;
      row[c++] = bl.valid ? bl.y_v - yv_true : 0.0;
    }
    traj.add_row(row);

    if (k == nsteps) break;

    // ---- advance ----
    x = rk4_step([&](double, const Eigen::VectorXd& xs) { return model->dynamics(xs, u_vec); },
                 t, x, dt);
    if (warm) filter.step(S, Y, dt);
    if (adapt) {
      if (mlobs) {
        if (!preloaded) {
          mlobs->preload(y, u, w);
          preloaded = true;
        }
        mlobs->step(y, u, w, r_adapt);
      } else if (eobs) {
        Eigen::VectorXd yv(1);
        yv(0) = yv_used;
        Eigen::VectorXd ym(1), um(1);
        ym(0) = y;
        um(0) = u;
        eobs->step(ym, um, yv, dt);
      } else if (oobs) {
        oobs->step(y, u, yv_used);
      }
    }
  }

  RunResult res{std::move(traj), {}, warm_step * dt, adapt_step * dt, r_step * dt, true};
  res.metrics = metrics_report(res.traj, sc.settle_time);

  // excitation diagnostic: probing energy per period must stay near nominal
  const double pe_S = min_window_mean_square(res.traj, "S", eps);
  res.metrics["pe.S"] = pe_S;
  res.metrics["pe.S_nominal"] = probe.mean_square_S();
  res.excitation_ok = pe_S > 0.5 * probe.mean_square_S();
  if (mlobs && sc.T - res.r_adapt_time > 1.0) {
    res.metrics["pe.phi_R"] = min_window_mean_square(res.traj, "phi_R", 0.5);
  }

  return res;
}

}  // namespace vosim
