#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vosim/engine.hpp"
#include "vosim/errors.hpp"
#include "vosim/ltv_ops.hpp"

namespace fs = std::filesystem;
using namespace vosim;

namespace {

std::string out_dir() {
  const char* env = std::getenv("VOSIM_OUTPUT_DIR");
  return env && *env ? env : ".";
}

std::string resolve_file(const std::string& opt, const std::string& dflt_name) {
  fs::path p = opt.empty() ? fs::path(out_dir()) / dflt_name : fs::path(opt);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p.string();
}

void print_metrics(const RunResult& res) {
  std::printf("rows: %zu\n", res.traj.rows());
  std::printf("warm_time: %.17g\n", res.warm_time);
  std::printf("adapt_time: %.17g\n", res.adapt_time);
  for (const auto& [k, v] : res.metrics) {
    std::printf("%s: %.17g\n", k.c_str(), v);
  }
  if (!res.excitation_ok) {
    std::fprintf(stderr, "warning: probing excitation fell below half its nominal level\n");
  }
}

std::string sanitize(std::string s) {
  for (auto& c : s) {
    if (c == '/' || c == '\\' || c == ' ') c = '_';
  }
  return s;
}

int cmd_simulate(const std::string& cfg_path, const std::string& out) {
  Config cfg = Config::parse_file(cfg_path);
  Scenario sc = build_scenario(cfg);
  RunResult res = run_scenario(sc);
  const std::string path = resolve_file(out, "trajectory.csv");
  res.traj.write_csv(path, sc.out_channels, static_cast<size_t>(sc.stride));
  print_metrics(res);
  std::printf("wrote: %s\n", path.c_str());
  return 0;
}

int cmd_sweep(const std::string& cfg_path, const std::string& param,
              const std::string& values_csv, const std::string& out) {
  std::vector<std::string> values;
  {
    std::string item;
    std::istringstream ss(values_csv);
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) values.push_back(item);
    }
  }
  if (values.empty()) throw ConfigError("sweep needs a non-empty --values list");

  const Config base = Config::parse_file(cfg_path);
  uint64_t base_seed = 1;
  if (base.has("noise.seed")) {
    Config probe_cfg = base;
    base_seed = std::strtoull(probe_cfg.get_string("noise.seed").c_str(), nullptr, 10);
  }

  // validate every scenario before launching any run
  std::vector<Scenario> scenarios;
  for (size_t i = 0; i < values.size(); ++i) {
    Config cfg = base;
    cfg.set(param, values[i]);
    char seed_buf[32];
    std::snprintf(seed_buf, sizeof(seed_buf), "%" PRIu64, base_seed ^ i);
    cfg.set("noise.seed", seed_buf);
    scenarios.push_back(build_scenario(cfg));
  }

  const fs::path dir = out.empty() ? fs::path(out_dir()) : fs::path(out);
  fs::create_directories(dir);

  std::vector<std::future<RunResult>> futs;
  futs.reserve(scenarios.size());
  for (const auto& sc : scenarios) {
    futs.push_back(std::async(std::launch::async, [&sc] { return run_scenario(sc); }));
  }
  std::vector<RunResult> results;
  results.reserve(futs.size());
  for (auto& f : futs) results.push_back(f.get());

  for (size_t i = 0; i < results.size(); ++i) {
    const fs::path p = dir / (sanitize(param) + "=" + sanitize(values[i]) + ".csv");
    results[i].traj.write_csv(p.string(), scenarios[i].out_channels,
                              static_cast<size_t>(scenarios[i].stride));
  }

  // summary: one row per value; sup/rms metrics carry a ratio vs previous row
  std::string header = "param,value";
  std::vector<std::string> keys;
  for (const auto& [k, v] : results[0].metrics) keys.push_back(k);
  for (const auto& k : keys) {
    header += "," + k;
    if (k.size() > 4 && (k.rfind(".sup") == k.size() - 4 || k.rfind(".rms") == k.size() - 4)) {
      header += "," + k + ".ratio";
    }
  }
  std::string body;
  char buf[64];
  for (size_t i = 0; i < results.size(); ++i) {
    body += param + "," + values[i];
    for (const auto& k : keys) {
      const double v = results[i].metrics.count(k) ? results[i].metrics.at(k) : NAN;
      std::snprintf(buf, sizeof(buf), ",%.17g", v);
      body += buf;
      if (k.size() > 4 && (k.rfind(".sup") == k.size() - 4 || k.rfind(".rms") == k.size() - 4)) {
        double ratio = NAN;
        if (i > 0 && results[i - 1].metrics.count(k) && results[i - 1].metrics.at(k) != 0.0) {
          ratio = v / results[i - 1].metrics.at(k);
        }
        std::snprintf(buf, sizeof(buf), ",%.17g", ratio);
        body += buf;
      }
    }
    body += "\n";
  }
  const fs::path summary = dir / "summary.csv";
  std::ofstream sf(summary, std::ios::binary);
  if (!sf) throw ConfigError("cannot open " + summary.string());
  sf << header << "\n" << body;
  std::printf("%s\n%s", header.c_str(), body.c_str());
  std::printf("wrote: %s\n", dir.string().c_str());
  return 0;
}

int cmd_compare_filters(const std::string& cfg_path, const std::string& out) {
  Config cfg = Config::parse_file(cfg_path);
  cfg.set("baseline.enabled", "true");
  Scenario sc = build_scenario(cfg);
  RunResult res = run_scenario(sc);
  const std::string path = resolve_file(out, "compare_filters.csv");
  res.traj.write_csv(path, sc.out_channels, static_cast<size_t>(sc.stride));
  const double drem = res.metrics.at("err_yv.rms");
  const double bl = res.metrics.at("err_yv_bl.rms");
  std::printf("drem_rms: %.17g\n", drem);
  std::printf("baseline_rms: %.17g\n", bl);
  std::printf("wrote: %s\n", path.c_str());
  return 0;
}

int cmd_freq_response(double d, double omega_max, int points, const std::string& out) {
  if (!(d > 0)) throw ConfigError("--d must be positive");
  if (!(omega_max > 0)) throw ConfigError("--omega-max must be positive");
  if (points < 1) throw ConfigError("--points must be >= 1");
  const std::string path = resolve_file(out, "freq_response.csv");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path);
  f << "omega,mag,phase\n";
  char buf[128];
  for (int i = 0; i <= points; ++i) {
    const double w = omega_max * static_cast<double>(i) / points;
    const auto G = gd_response(d, w);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", w, std::abs(G), std::arg(G));
    f << buf;
  }
  std::printf("wrote: %s\n", path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"signal-injection simulation toolkit: virtual-output filtering and "
               "state observers for electromechanical systems"};
  app.require_subcommand(1);

  std::string cfg_path, out, param, values;
  double d = 0.0, omega_max = 0.0;
  int points = 0;

  auto* sim = app.add_subcommand("simulate", "run one scenario, write the trajectory CSV");
  sim->add_option("config", cfg_path, "scenario config file")->required();
  sim->add_option("-o,--output", out, "output CSV path");

  auto* swp = app.add_subcommand("sweep", "run a scenario once per parameter value");
  swp->add_option("config", cfg_path, "scenario config file")->required();
  swp->add_option("--param", param, "config key to sweep")->required();
  swp->add_option("--values", values, "comma-separated values")->required();
  swp->add_option("-o,--output", out, "output directory");

  auto* cmp = app.add_subcommand("compare-filters",
                                 "run with the window-demod baseline enabled and "
                                 "report both estimators' steady errors");
  cmp->add_option("config", cfg_path, "scenario config file")->required();
  cmp->add_option("-o,--output", out, "output CSV path");

  auto* frq = app.add_subcommand("freq-response",
                                 "tabulate the ripple extractor's frequency response");
  frq->add_option("--d", d, "extractor delay [s]")->required();
  frq->add_option("--omega-max", omega_max, "largest frequency [rad/s]")->required();
  frq->add_option("--points", points, "number of frequency steps")->required();
  frq->add_option("-o,--output", out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (sim->parsed()) return cmd_simulate(cfg_path, out);
    if (swp->parsed()) return cmd_sweep(cfg_path, param, values, out);
    if (cmp->parsed()) return cmd_compare_filters(cfg_path, out);
    if (frq->parsed()) return cmd_freq_response(d, omega_max, points, out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const SimulationError& e) {
    std::fprintf(stderr, "runtime abort: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
