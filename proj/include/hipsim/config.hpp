#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hipsim/calibration.hpp"
#include "hipsim/integrator.hpp"
#include "hipsim/mccp.hpp"
#include "hipsim/tables.hpp"

namespace hipsim {

//! Material tables JSON. All physical quantities carry explicit unit-suffix
//! keys (T_C, E_MPa, alpha_per_C, A_per_MPaN_s, ...); see the README for the
//! full schema. Loading validates against the MaterialTables invariants.
MaterialTables load_material_tables(const std::string& path);
MaterialTables material_tables_from_json_text(const std::string& text);
std::string material_tables_json_text(const MaterialTables& tables,
                                      const std::string& description);
void save_material_tables(const std::string& path, const MaterialTables& tables,
                          const std::string& description);

//! MCCP parameter JSON (M grid plus hardening pairs; the eps_vol_p column is
//! the compactive volumetric strain magnitude |eps_vol_p|).
MccpParams load_mccp_params(const std::string& path, double rho0);

HipSchedule load_schedule(const std::string& path);
HipSchedule schedule_from_json_text(const std::string& text);

enum class ModelChoice { Abouaf, Mccp, Both };

struct ScenarioConfig {
  std::string name = "scenario";
  ModelChoice model = ModelChoice::Abouaf;
  MaterialTables tables;
  MccpParams mccp;       //!< valid only when model includes MCCP
  bool has_mccp = false;
  LoadingProgram loading;
  IntegratorOptions integrator;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
};

//! Parse and fully validate a simulate config (referenced files are loaded
//! here, so missing tables fail before any output is produced).
ScenarioConfig load_scenario_config(const std::string& path);

struct CompareConfig {
  std::vector<ScenarioConfig> scenarios;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
};

CompareConfig load_compare_config(const std::string& path);

struct CalibrateCliConfig {
  CalibrationDataset dataset;
  MaterialTables base_tables;
  CalibrationConfig calib;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
};

CalibrateCliConfig load_calibrate_config(const std::string& path);

}  // namespace hipsim
