#include "hipsim/config.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "hipsim/csv.hpp"
#include "hipsim/errors.hpp"

namespace hipsim {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open: " + path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": JSON parse error: " + e.what());
  }
}

json parse_text(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": JSON parse error: " + e.what());
  }
}

const json& need(const json& j, const char* key, const std::string& ctx) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(ctx + ": missing key '" + key + "'");
  return *it;
}

std::vector<double> num_array(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw ConfigError(ctx + ": expected an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(ctx + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

LinearTable linear_table(const json& j, const char* key_name,
                         const char* val_name, const std::string& ctx) {
  return LinearTable(num_array(need(j, key_name, ctx), ctx + "." + key_name),
                     num_array(need(j, val_name, ctx), ctx + "." + val_name),
                     ctx);
}

BilinearTable bilinear_table(const json& j, const char* val_name,
                             const std::string& ctx) {
  const auto x = num_array(need(j, "rho", ctx), ctx + ".rho");
  const auto y = num_array(need(j, "T_C", ctx), ctx + ".T_C");
  const json& vj = need(j, val_name, ctx);
  if (!vj.is_array()) throw ConfigError(ctx + ": expected a 2D array");
  std::vector<std::vector<double>> vals;
  for (const auto& row : vj) vals.push_back(num_array(row, ctx + "." + val_name));
  return BilinearTable(x, y, std::move(vals), ctx);
}

MaterialTables tables_from_json(const json& j, const std::string& ctx) {
  return MaterialTables(
      linear_table(need(j, "A_table", ctx), "T_C", "A_per_MPaN_s", ctx + ".A_table"),
      linear_table(need(j, "N_table", ctx), "T_C", "N", ctx + ".N_table"),
      linear_table(need(j, "c_table", ctx), "rho", "c", ctx + ".c_table"),
      linear_table(need(j, "f_table", ctx), "rho", "f", ctx + ".f_table"),
      bilinear_table(need(j, "elastic_E", ctx), "E_MPa", ctx + ".elastic_E"),
      bilinear_table(need(j, "elastic_nu", ctx), "nu", ctx + ".elastic_nu"),
      bilinear_table(need(j, "cte", ctx), "alpha_per_C", ctx + ".cte"));
}

json linear_table_json(const LinearTable& t, const char* key_name,
                       const char* val_name) {
  json j;
  j[key_name] = t.keys();
  j[val_name] = t.values();
  return j;
}

json bilinear_table_json(const BilinearTable& t, const char* val_name) {
  json j;
  j["rho"] = t.x_keys();
  j["T_C"] = t.y_keys();
  j[val_name] = t.values();
  return j;
}

HipSchedule schedule_from_json(const json& j, const std::string& ctx) {
  const json& pp = need(j, "pressure_profile", ctx);
  const json& tp = need(j, "temperature_profile", ctx);
  return HipSchedule(
      LinearTable(num_array(need(pp, "time_s", ctx), ctx),
                  num_array(need(pp, "pressure_MPa", ctx), ctx), "pressure(t)"),
      LinearTable(num_array(need(tp, "time_s", ctx), ctx),
                  num_array(need(tp, "temperature_C", ctx), ctx),
                  "temperature(t)"));
}

std::string resolve(const std::string& base_dir, const std::string& p) {
  fs::path fp(p);
  if (fp.is_absolute()) return p;
  return (fs::path(base_dir) / fp).string();
}

IntegratorOptions integrator_from_json(const json& j, const std::string& ctx) {
  IntegratorOptions opt;
  auto get = [&](const char* key, double& target) {
    if (j.contains(key)) {
      if (!j[key].is_number()) throw ConfigError(ctx + ": '" + key + "' must be a number");
      target = j[key].get<double>();
    }
  };
  get("dt_min_s", opt.dt_min);
  get("dt_max_s", opt.dt_max);
  get("dt_init_s", opt.dt_init);
  get("newton_tol", opt.newton_tol);
  get("newton_tol_strain", opt.newton_tol_strain);
  get("growth", opt.growth);
  get("halving", opt.halving);
  get("max_drho", opt.max_drho);
  get("max_dstrain", opt.max_dstrain);
  get("sample_dt_s", opt.sample_dt);
  if (j.contains("max_newton")) opt.max_newton = j["max_newton"].get<int>();
  if (opt.dt_min > opt.dt_max || opt.dt_min <= 0.0) {
    throw ConfigError(ctx + ": requires 0 < dt_min_s <= dt_max_s");
  }
  if (opt.halving <= 0.0 || opt.halving >= 1.0 || opt.growth < 1.0) {
    throw ConfigError(ctx + ": requires 0 < halving < 1 and growth >= 1");
  }
  return opt;
}

LoadingProgram loading_from_json(const json& j, const std::string& base_dir,
                                 const std::string& ctx) {
  LoadingProgram prog;
  const std::string mode = need(j, "mode", ctx).get<std::string>();
  prog.rho0 = need(j, "rho0", ctx).get<double>();
  if (!(prog.rho0 > 0.0 && prog.rho0 <= 1.0)) {
    throw ConfigError(ctx + ": rho0 must lie in (0, 1]");
  }
  if (j.contains("T_ref_C")) prog.T_ref = j["T_ref_C"].get<double>();
  if (mode == "hydrostatic_hip") {
    HydrostaticHip hip;
    if (j.contains("schedule_file")) {
      hip.schedule = load_schedule(resolve(base_dir, j["schedule_file"].get<std::string>()));
    } else {
      hip.schedule = schedule_from_json(need(j, "schedule", ctx), ctx + ".schedule");
    }
    prog.mode = hip;
  } else if (mode == "uniaxial_compression") {
    UniaxialCompression uni;
    uni.strain_rate = need(j, "strain_rate_per_s", ctx).get<double>();
    uni.T = need(j, "temperature_C", ctx).get<double>();
    uni.duration = need(j, "duration_s", ctx).get<double>();
    if (!(uni.strain_rate > 0.0) || !(uni.duration > 0.0)) {
      throw ConfigError(ctx + ": strain rate and duration must be > 0");
    }
    prog.mode = uni;
  } else {
    throw ConfigError(ctx + ": unknown mode '" + mode + "'");
  }
  return prog;
}

ModelChoice model_from_json(const json& j, const std::string& ctx) {
  const std::string m = need(j, "model", ctx).get<std::string>();
  if (m == "abouaf") return ModelChoice::Abouaf;
  if (m == "mccp") return ModelChoice::Mccp;
  if (m == "both") return ModelChoice::Both;
  throw ConfigError(ctx + ": model must be abouaf, mccp or both");
}

ScenarioConfig scenario_from_json(const json& j, const std::string& base_dir,
                                  const std::string& ctx) {
  ScenarioConfig cfg;
  if (j.contains("name")) cfg.name = j["name"].get<std::string>();
  cfg.model = model_from_json(j, ctx);
  cfg.tables = load_material_tables(
      resolve(base_dir, need(j, "tables_file", ctx).get<std::string>()));
  cfg.loading = loading_from_json(need(j, "loading", ctx), base_dir, ctx + ".loading");
  if (cfg.model != ModelChoice::Abouaf) {
    const std::string mccp_file =
        need(j, "mccp_file", ctx).get<std::string>();
    cfg.mccp = load_mccp_params(resolve(base_dir, mccp_file), cfg.loading.rho0);
    cfg.has_mccp = true;
  }
  if (j.contains("integrator")) {
    cfg.integrator = integrator_from_json(j["integrator"], ctx + ".integrator");
  }
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  return cfg;
}

}  // namespace

MaterialTables load_material_tables(const std::string& path) {
  return tables_from_json(parse_file(path), path);
}

MaterialTables material_tables_from_json_text(const std::string& text) {
  return tables_from_json(parse_text(text, "tables"), "tables");
}

std::string material_tables_json_text(const MaterialTables& tables,
                                      const std::string& description) {
  json j;
  j["description"] = description;
  j["A_table"] = linear_table_json(tables.A_table(), "T_C", "A_per_MPaN_s");
  j["N_table"] = linear_table_json(tables.N_table(), "T_C", "N");
  j["c_table"] = linear_table_json(tables.c_table(), "rho", "c");
  j["f_table"] = linear_table_json(tables.f_table(), "rho", "f");
  j["elastic_E"] = bilinear_table_json(tables.E_table(), "E_MPa");
  j["elastic_nu"] = bilinear_table_json(tables.nu_table(), "nu");
  j["cte"] = bilinear_table_json(tables.cte_table(), "alpha_per_C");
  return j.dump(2) + "\n";
}

void save_material_tables(const std::string& path, const MaterialTables& tables,
                          const std::string& description) {
  atomic_write(path, material_tables_json_text(tables, description));
}

MccpParams load_mccp_params(const std::string& path, double rho0) {
  const json j = parse_file(path);
  const json& h = need(j, "hardening_table", path);
  // Pairs are stored as (p_MPa, eps_vol_p); the lookup runs over the
  // compactive strain magnitude, so eps_vol_p is the interpolation key.
  return MccpParams(
      bilinear_table(need(j, "M_table", path), "M", path + ".M_table"),
      LinearTable(num_array(need(h, "eps_vol_p", path), path),
                  num_array(need(h, "p_MPa", path), path), "hardening"),
      rho0);
}

HipSchedule load_schedule(const std::string& path) {
  return schedule_from_json(parse_file(path), path);
}

HipSchedule schedule_from_json_text(const std::string& text) {
  return schedule_from_json(parse_text(text, "schedule"), "schedule");
}

ScenarioConfig load_scenario_config(const std::string& path) {
  const json j = parse_file(path);
  return scenario_from_json(j, fs::path(path).parent_path().string(), path);
}

CompareConfig load_compare_config(const std::string& path) {
  const json j = parse_file(path);
  const std::string base_dir = fs::path(path).parent_path().string();
  CompareConfig cfg;
  const json& sc = need(j, "scenarios", path);
  if (!sc.is_array() || sc.size() < 2) {
    throw ConfigError(path + ": compare needs at least 2 scenarios");
  }
  int k = 0;
  for (const auto& s : sc) {
    ScenarioConfig one =
        scenario_from_json(s, base_dir, path + ".scenarios[" + std::to_string(k) + "]");
    if (one.name == "scenario") one.name = "scenario" + std::to_string(k);
    cfg.scenarios.push_back(std::move(one));
    ++k;
  }
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  return cfg;
}

CalibrateCliConfig load_calibrate_config(const std::string& path) {
  const json j = parse_file(path);
  const std::string base_dir = fs::path(path).parent_path().string();
  CalibrateCliConfig cfg;

  const json& ds = need(j, "dataset", path);
  if (ds.contains("dense_yield_csv")) {
    cfg.dataset.dense_yield =
        read_dense_yield_csv(resolve(base_dir, ds["dense_yield_csv"].get<std::string>()));
  }
  if (ds.contains("porous_yield_csv")) {
    cfg.dataset.porous_yield =
        read_porous_yield_csv(resolve(base_dir, ds["porous_yield_csv"].get<std::string>()));
  }
  if (ds.contains("densification_csv")) {
    cfg.dataset.densification = read_densification_csv(
        resolve(base_dir, ds["densification_csv"].get<std::string>()));
  }
  if (ds.contains("schedule_file")) {
    cfg.dataset.schedule =
        load_schedule(resolve(base_dir, ds["schedule_file"].get<std::string>()));
  } else if (ds.contains("schedule")) {
    cfg.dataset.schedule = schedule_from_json(ds["schedule"], path + ".dataset.schedule");
  }
  if (ds.contains("rho0")) cfg.dataset.rho0 = ds["rho0"].get<double>();

  cfg.base_tables = load_material_tables(
      resolve(base_dir, need(j, "base_tables_file", path).get<std::string>()));

  if (j.contains("seeds")) {
    const json& s = j["seeds"];
    if (s.contains("A0")) cfg.calib.seed.A0 = s["A0"].get<double>();
    if (s.contains("N0")) cfg.calib.seed.N0 = s["N0"].get<double>();
    if (s.contains("fix_N")) cfg.calib.seed.fix_N = s["fix_N"].get<bool>();
    if (s.contains("N0_table")) {
      const json& nt = s["N0_table"];
      cfg.calib.seed.N0_T = num_array(need(nt, "T_C", path), path + ".seeds.N0_table");
      cfg.calib.seed.N0_values =
          num_array(need(nt, "N0", path), path + ".seeds.N0_table");
    }
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (t.contains("yield_rel_tol")) cfg.calib.yield_rel_tol = t["yield_rel_tol"].get<double>();
    if (t.contains("step3_rel_tol")) cfg.calib.step3_rel_tol = t["step3_rel_tol"].get<double>();
  }
  if (j.contains("use_printed_inversions")) {
    cfg.calib.use_printed_inversions = j["use_printed_inversions"].get<bool>();
  }
  if (j.contains("max_evals")) cfg.calib.max_evals = j["max_evals"].get<int>();
  if (j.contains("simplex_rel_tol")) cfg.calib.simplex_rel_tol = j["simplex_rel_tol"].get<double>();
  if (j.contains("c_floor")) cfg.calib.c_floor = j["c_floor"].get<double>();
  if (j.contains("integrator")) {
    cfg.calib.integrator = integrator_from_json(j["integrator"], path + ".integrator");
  }
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("seed")) {
    cfg.seed = j["seed"].get<std::uint64_t>();
    cfg.calib.rng_seed = cfg.seed;
  }
  return cfg;
}

}  // namespace hipsim
