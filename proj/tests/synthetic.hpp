#pragma once

// Shared fixtures for the test suites: the synthetic property set shipped in
// data/, small hand-rolled tables, and forward-model dataset generation used
// by the calibration round trips.

#include <random>
#include <string>
#include <vector>

#include "hipsim/calibration.hpp"
#include "hipsim/config.hpp"
#include "hipsim/integrator.hpp"

namespace hipsim::testing {

inline std::string data_path(const std::string& name) {
  return std::string(HIPSIM_DATA_DIR) + "/" + name;
}

inline MaterialTables synthetic_tables() {
  return load_material_tables(data_path("tables_ss316_synthetic.json"));
}

inline HipSchedule synthetic_schedule() {
  return load_schedule(data_path("schedule_hip.json"));
}

inline MccpParams synthetic_mccp(double rho0) {
  return load_mccp_params(data_path("mccp_synthetic.json"), rho0);
}

//! Minimal dense power-law material: constant A, N; constant elasticity.
inline MaterialTables dense_power_law(double A, double N, double E = 100000.0,
                                      double nu = 0.3) {
  return MaterialTables(
      LinearTable({20.0}, {A}, "A"), LinearTable({20.0}, {N}, "N"),
      LinearTable({1.0}, {1.0}, "c"), LinearTable({1.0}, {0.0}, "f"),
      BilinearTable({1.0}, {20.0}, {{E}}, "E"),
      BilinearTable({1.0}, {20.0}, {{nu}}, "nu"),
      BilinearTable({1.0}, {20.0}, {{1.0e-5}}, "cte"));
}

//! Forward-model dataset for the calibration round trip: yield stresses from
//! uniaxial probes and a densification trace sampled from the HIP run, all
//! generated with the truth tables.
struct SyntheticDatasetSpec {
  std::vector<double> dense_T = {600.0, 800.0, 1000.0, 1100.0};
  std::vector<double> dense_rates = {1e-4, 1e-3};
  // (T, rho) pairs walked during the cycle, one porous probe each
  std::vector<std::pair<double, double>> porous_points = {
      {1000.0, 0.65}, {1100.0, 0.72}, {1000.0, 0.80},
      {1100.0, 0.88}, {1000.0, 0.95}, {1100.0, 1.0}};
  double porous_rate = 1e-4;
  double densification_t0 = 7260.0;
  double densification_t1 = 13200.0;
  double densification_dt = 60.0;
  std::vector<double> plateau_times = {14400.0, 15300.0, 16200.0};
  double rho0 = 0.69;
};

inline CalibrationDataset make_synthetic_dataset(
    const MaterialTables& truth, const HipSchedule& schedule,
    const SyntheticDatasetSpec& spec = {},
    const IntegratorOptions& opt = {}) {
  CalibrationDataset ds;
  ds.schedule = schedule;
  ds.rho0 = spec.rho0;

  for (double T : spec.dense_T) {
    for (double rate : spec.dense_rates) {
      ds.dense_yield.push_back({T, rate, simulate_sigma02(truth, T, rate, 1.0, opt)});
    }
  }
  for (const auto& [T, rho] : spec.porous_points) {
    ds.porous_yield.push_back(
        {T, rho, spec.porous_rate,
         simulate_sigma02(truth, T, spec.porous_rate, rho, opt)});
  }

  LoadingProgram prog;
  prog.mode = HydrostaticHip{schedule};
  prog.rho0 = spec.rho0;
  const IntegrateResult run = integrate(prog, AbouafModel{}, truth, opt);
  for (double t = spec.densification_t0; t <= spec.densification_t1 + 1e-9;
       t += spec.densification_dt) {
    ds.densification.push_back(
        {t, sample_field(run.trajectory, TrajectoryField::Rho, t)});
  }
  for (double t : spec.plateau_times) {
    ds.densification.push_back(
        {t, sample_field(run.trajectory, TrajectoryField::Rho, t)});
  }
  return ds;
}

//! Multiplicative noise on the yield stresses only (densification untouched).
inline CalibrationDataset noisy_yields(CalibrationDataset ds, double rel_sigma,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-rel_sigma, rel_sigma);
  for (auto& row : ds.dense_yield) row.sigma02 *= 1.0 + u(rng);
  for (auto& row : ds.porous_yield) row.sigma02 *= 1.0 + u(rng);
  return ds;
}

}  // namespace hipsim::testing
