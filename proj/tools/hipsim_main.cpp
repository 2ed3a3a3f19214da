#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "hipsim/config.hpp"
#include "hipsim/csv.hpp"
#include "hipsim/errors.hpp"
#include "hipsim/integrator.hpp"

namespace fs = std::filesystem;
using namespace hipsim;

namespace {

enum class LogLevel { Quiet = 0, Error = 1, Warn = 2, Info = 3, Debug = 4 };

LogLevel g_log_level = LogLevel::Warn;

void init_log_level() {
  const char* env = std::getenv("HIPSIM_LOG");
  if (!env) return;
  const std::string v(env);
  if (v == "quiet") g_log_level = LogLevel::Quiet;
  else if (v == "error") g_log_level = LogLevel::Error;
  else if (v == "warn") g_log_level = LogLevel::Warn;
  else if (v == "info") g_log_level = LogLevel::Info;
  else if (v == "debug") g_log_level = LogLevel::Debug;
}

void log(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) <= static_cast<int>(g_log_level)) {
    std::cerr << "hipsim: " << msg << "\n";
  }
}

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string model_name(ModelChoice m) {
  return m == ModelChoice::Abouaf ? "abouaf" : "mccp";
}

//! First time rho(t) reaches the given level, linearly interpolated.
std::optional<double> time_to_rho(const Trajectory& traj, double level) {
  for (std::size_t i = 1; i < traj.size(); ++i) {
    if (traj.rho[i] >= level && traj.rho[i - 1] < level) {
      const double w = (level - traj.rho[i - 1]) / (traj.rho[i] - traj.rho[i - 1]);
      return traj.t[i - 1] + w * (traj.t[i] - traj.t[i - 1]);
    }
  }
  if (!traj.rho.empty() && traj.rho.front() >= level) return traj.t.front();
  return std::nullopt;
}

struct RunOutput {
  std::string model;
  Trajectory traj;
};

int run_scenario_models(const ScenarioConfig& cfg, std::vector<RunOutput>& outs,
                        std::string& failure) {
  std::vector<ModelChoice> models;
  if (cfg.model == ModelChoice::Both) {
    models = {ModelChoice::Abouaf, ModelChoice::Mccp};
  } else {
    models = {cfg.model};
  }
  for (ModelChoice m : models) {
    ModelSelection sel;
    if (m == ModelChoice::Abouaf) {
      sel = AbouafModel{};
    } else {
      sel = MccpModel{cfg.mccp};
    }
    log(LogLevel::Info, "running " + model_name(m) + " model for '" + cfg.name + "'");
    IntegrateResult res = integrate(cfg.loading, sel, cfg.tables, cfg.integrator);
    outs.push_back({model_name(m), std::move(res.trajectory)});
    if (!res.completed) {
      failure = model_name(m) + ": " + res.failure;
      return kExitNumerical;
    }
  }
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_override,
                 std::optional<std::uint64_t> seed_override) {
  ScenarioConfig cfg;
  try {
    cfg = load_scenario_config(config_path);
  } catch (const std::exception& e) {
    log(LogLevel::Error, e.what());
    return kExitConfig;
  }
  if (!out_override.empty()) cfg.output_dir = out_override;
  if (seed_override) cfg.seed = *seed_override;

  std::vector<RunOutput> outs;
  std::string failure;
  const int rc = run_scenario_models(cfg, outs, failure);

  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  std::ostringstream summary;
  summary << "model,final_rho,time_to_rho_0p99_s\n";
  for (const auto& o : outs) {
    write_trajectory_csv((fs::path(cfg.output_dir) / ("trajectory_" + o.model + ".csv")).string(),
                         o.traj);
    const auto t99 = time_to_rho(o.traj, 0.99);
    summary << o.model << ',' << format_double(o.traj.rho.back()) << ','
            << (t99 ? format_double(*t99) : "never") << "\n";
  }
  if (rc != kExitOk) {
    summary << "# numerical failure: " << failure << "\n";
    atomic_write((fs::path(cfg.output_dir) / "summary.txt").string(), summary.str());
    log(LogLevel::Error, "numerical failure: " + failure);
    return rc;
  }
  atomic_write((fs::path(cfg.output_dir) / "summary.txt").string(), summary.str());
  return kExitOk;
}

bool same_loading(const LoadingProgram& a, const LoadingProgram& b) {
  if (a.mode.index() != b.mode.index()) return false;
  if (std::holds_alternative<HydrostaticHip>(a.mode)) {
    return std::get<HydrostaticHip>(a.mode).schedule ==
           std::get<HydrostaticHip>(b.mode).schedule;
  }
  const auto& ua = std::get<UniaxialCompression>(a.mode);
  const auto& ub = std::get<UniaxialCompression>(b.mode);
  return ua.strain_rate == ub.strain_rate && ua.T == ub.T &&
         ua.duration == ub.duration;
}

int cmd_compare(const std::string& config_path, const std::string& out_override,
                std::optional<std::uint64_t> seed_override) {
  CompareConfig cfg;
  try {
    cfg = load_compare_config(config_path);
  } catch (const std::exception& e) {
    log(LogLevel::Error, e.what());
    return kExitConfig;
  }
  if (!out_override.empty()) cfg.output_dir = out_override;
  if (seed_override) cfg.seed = *seed_override;

  for (std::size_t i = 1; i < cfg.scenarios.size(); ++i) {
    if (!same_loading(cfg.scenarios[0].loading, cfg.scenarios[i].loading)) {
      log(LogLevel::Error, "compare: scenario '" + cfg.scenarios[i].name +
                               "' has a mismatched loading schedule");
      return kExitConfig;
    }
    if (cfg.scenarios[i].model == ModelChoice::Both) {
      log(LogLevel::Error, "compare: pick one model per scenario");
      return kExitConfig;
    }
  }
  if (cfg.scenarios[0].model == ModelChoice::Both) {
    log(LogLevel::Error, "compare: pick one model per scenario");
    return kExitConfig;
  }

  std::vector<Trajectory> trajs;
  for (const auto& sc : cfg.scenarios) {
    std::vector<RunOutput> outs;
    std::string failure;
    if (run_scenario_models(sc, outs, failure) != kExitOk) {
      log(LogLevel::Error, "scenario '" + sc.name + "' failed: " + failure);
      return kExitNumerical;
    }
    trajs.push_back(std::move(outs.front().traj));
  }

  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);

  const Series mean = mean_series(trajs, TrajectoryField::Rho);
  std::ostringstream series;
  series << "t";
  for (const auto& sc : cfg.scenarios) series << ",rho_" << sc.name;
  series << ",rho_mean\n";
  for (std::size_t i = 0; i < mean.t.size(); ++i) {
    series << format_double(mean.t[i]);
    for (const auto& tr : trajs) {
      series << ',' << format_double(sample_field(tr, TrajectoryField::Rho, mean.t[i]));
    }
    series << ',' << format_double(mean.value[i]) << "\n";
  }
  atomic_write((fs::path(cfg.output_dir) / "compare_series.csv").string(), series.str());

  std::ostringstream summary;
  summary << "scenario,final_rho,time_to_rho_0p99_s,max_abs_drho_vs_first,"
             "max_abs_drho_late_quarter\n";
  const double t_late = mean.t.empty()
                            ? 0.0
                            : mean.t.front() + 0.75 * (mean.t.back() - mean.t.front());
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    double max_diff = 0.0, max_late = 0.0;
    for (double t : mean.t) {
      const double a = sample_field(trajs[0], TrajectoryField::Rho, t);
      const double b = sample_field(trajs[k], TrajectoryField::Rho, t);
      max_diff = std::max(max_diff, std::abs(a - b));
      if (t >= t_late) max_late = std::max(max_late, std::abs(a - b));
    }
    const auto t99 = time_to_rho(trajs[k], 0.99);
    summary << cfg.scenarios[k].name << ',' << format_double(trajs[k].rho.back())
            << ',' << (t99 ? format_double(*t99) : "never") << ','
            << format_double(max_diff) << ',' << format_double(max_late) << "\n";
  }
  atomic_write((fs::path(cfg.output_dir) / "compare_summary.txt").string(), summary.str());
  return kExitOk;
}

int cmd_calibrate(const std::string& config_path, const std::string& out_override,
                  std::optional<std::uint64_t> seed_override) {
  CalibrateCliConfig cfg;
  try {
    cfg = load_calibrate_config(config_path);
  } catch (const std::exception& e) {
    log(LogLevel::Error, e.what());
    return kExitConfig;
  }
  if (!out_override.empty()) cfg.output_dir = out_override;
  if (seed_override) {
    cfg.seed = *seed_override;
    cfg.calib.rng_seed = *seed_override;
  }
  if (cfg.dataset.dense_yield.empty() && cfg.dataset.porous_yield.empty() &&
      cfg.dataset.densification.empty()) {
    log(LogLevel::Error, "calibrate: dataset is empty");
    return kExitConfig;
  }

  const CalibrationResult result = run_pipeline(cfg.dataset, cfg.base_tables, cfg.calib);

  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  const std::string label = result.ok() ? "tables_calibrated.json" : "tables_partial.json";
  const std::string description =
      result.ok() ? "calibrated from dataset (synthetic/user-supplied data)"
                  : "PARTIAL calibration result: " + result.message;
  save_material_tables((fs::path(cfg.output_dir) / label).string(), result.tables,
                       description);
  atomic_write((fs::path(cfg.output_dir) / "calibration_report.txt").string(),
               result.report_text());

  nlohmann::json rep;
  rep["status"] = result.ok() ? "ok"
                : result.status == PipelineStatus::FailedStep1 ? "failed_step1"
                : result.status == PipelineStatus::FailedStep2 ? "failed_step2"
                                                               : "failed_step3";
  rep["message"] = result.message;
  rep["seed"] = cfg.seed;
  auto entries = [](const std::vector<FitReportEntry>& es) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : es) {
      out.push_back({{"T_C", e.T},
                     {"rho", e.rho},
                     {"target_MPa", e.target},
                     {"achieved_MPa", e.achieved},
                     {"rel_err", e.rel_err},
                     {"evals", e.evals}});
    }
    return out;
  };
  rep["step1"] = entries(result.step1_report);
  rep["step2"] = {{"used", result.step2_used}, {"skipped", result.step2_skipped}};
  rep["step3"] = entries(result.step3_report);
  rep["warnings"] = result.warnings;
  atomic_write((fs::path(cfg.output_dir) / "calibration_report.json").string(),
               rep.dump(2) + "\n");

  if (!result.ok()) {
    log(LogLevel::Error, "calibration failed: " + result.message);
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  init_log_level();
  CLI::App app{"Material-point simulator and calibration toolkit for "
               "powder-densification constitutive models"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--seed", seed, "random seed (overrides config)");
  };
  CLI::App* sim = app.add_subcommand("simulate", "run a loading scenario");
  CLI::App* cal = app.add_subcommand("calibrate", "run the parameter identification pipeline");
  CLI::App* cmp = app.add_subcommand("compare", "run and compare several scenarios");
  add_common(sim);
  add_common(cal);
  add_common(cmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_dir, seed);
    if (cal->parsed()) return cmd_calibrate(config_path, out_dir, seed);
    if (cmp->parsed()) return cmd_compare(config_path, out_dir, seed);
  } catch (const ConfigError& e) {
    log(LogLevel::Error, e.what());
    return kExitConfig;
  } catch (const DataError& e) {
    log(LogLevel::Error, e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    log(LogLevel::Error, std::string("unexpected error: ") + e.what());
    return kExitNumerical;
  }
  return kExitConfig;
}
