#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hipsim/integrator.hpp"
#include "hipsim/state.hpp"
#include "hipsim/tables.hpp"

namespace hipsim {

struct DenseYieldPoint {
  double T = 0.0;            //!< degC
  double strain_rate = 0.0;  //!< 1/s
  double sigma02 = 0.0;      //!< MPa
};

struct PorousYieldPoint {
  double T = 0.0;
  double rho = 0.0;
  double strain_rate = 0.0;
  double sigma02 = 0.0;
};

struct DensificationPoint {
  double t = 0.0;    //!< s
  double rho = 0.0;
};

//! Experimental inputs of the three-step identification pipeline.
struct CalibrationDataset {
  std::vector<DenseYieldPoint> dense_yield;
  std::vector<PorousYieldPoint> porous_yield;
  std::vector<DensificationPoint> densification;
  HipSchedule schedule;  //!< cycle the densification samples were taken from
  double rho0 = 0.69;
};

//! Seed for the per-temperature (A, N) fit. When absent, N is seeded from a
//! two-rate pair when the data provides one (N = ln(r2/r1) / ln(s2/s1)) and
//! A from the closed-form steady-state relation A = rate / sigma^N. With
//! fix_N set, N is pinned to prior creep knowledge (the scalar N0 or the
//! linearly interpolated N0_table) and only A is optimized; this is the
//! single-strain-rate workflow and the robust choice for noisy yield data.
struct AnSeed {
  std::optional<double> A0;
  std::optional<double> N0;
  bool fix_N = false;
  std::vector<double> N0_T;       //!< optional per-temperature prior for N
  std::vector<double> N0_values;
};

struct CalibrationConfig {
  AnSeed seed;
  double yield_rel_tol = 0.005;   //!< step-1 acceptance on |sim - exp| / exp
  double step3_rel_tol = 0.005;   //!< step-3 acceptance on |sim - exp| / exp
  bool use_printed_inversions = false;  //!< compatibility forms of the f/c seeds
  int max_evals = 400;
  double simplex_rel_tol = 1e-6;
  double c_floor = 1e-6;
  IntegratorOptions integrator;   //!< options for the probe simulations
  std::uint64_t rng_seed = 0;     //!< reserved; pipeline itself is deterministic
};

//! One fitted point of a calibration step.
struct FitReportEntry {
  double T = 0.0;
  double rho = 1.0;          //!< 1 for the dense step
  double target = 0.0;       //!< experimental sigma02, MPa
  double achieved = 0.0;     //!< simulated sigma02 at the fitted parameters
  double rel_err = 0.0;
  int evals = 0;
  //! Step-3 only: best-so-far |sim - exp| after each probe (nonincreasing).
  std::vector<double> error_trace;
};

struct AnFitResult {
  LinearTable A_table;
  LinearTable N_table;
  std::vector<FitReportEntry> report;
  bool ok = false;
  std::string message;
};

struct FTableResult {
  LinearTable f_table;
  std::vector<std::string> warnings;
  int used = 0;
  int skipped = 0;
  bool ok = false;
  std::string message;
};

struct CTableResult {
  LinearTable c_table;
  std::vector<FitReportEntry> report;
  std::vector<std::string> warnings;
  bool ok = false;
  std::string message;
};

//! Step 1: per-temperature minimization of the yield-stress mismatch of the
//! dense uniaxial response over (log10 A, N), derivative-free (Nelder-Mead
//! simplex). Temperatures are fitted independently; input order is
//! irrelevant. base supplies the thermo-elastic properties of the probes.
AnFitResult calibrate_AN(const std::vector<DenseYieldPoint>& dense_yield,
                         const MaterialTables& base,
                         const CalibrationConfig& cfg);

//! Step 2: invert the densification-rate data for f(rho). rho(t) is smoothed
//! with a 3-point moving average and differentiated by central differences;
//! each usable sample yields f = (rho_dot / (3 rho A |I1|^N))^(2/(N+1)) at the
//! schedule's (T, P). Samples with nonpositive rate are skipped with a
//! warning; the dense limit f(1) = 0 is appended.
FTableResult invert_f(const std::vector<DensificationPoint>& densification,
                      const HipSchedule& schedule, const LinearTable& A_table,
                      const LinearTable& N_table,
                      bool use_printed_inversion = false);

//! Step 3: per-(T, rho) refinement of c. Seeded by the closed-form inversion
//! c = (rate / (A sigma^N))^(2/(N+1)) - f, then bracketed scalar minimization
//! of the porous-probe yield-stress error (best-so-far never worsens).
//! tables must carry the calibrated A, N and f.
CTableResult calibrate_c(const std::vector<PorousYieldPoint>& porous_yield,
                         const MaterialTables& tables,
                         const CalibrationConfig& cfg);

enum class PipelineStatus { Ok, FailedStep1, FailedStep2, FailedStep3 };

struct CalibrationResult {
  PipelineStatus status = PipelineStatus::Ok;
  std::string message;
  MaterialTables tables;  //!< fully calibrated when Ok; partial progress otherwise
  std::vector<FitReportEntry> step1_report;
  std::vector<FitReportEntry> step3_report;
  std::vector<std::string> warnings;
  int step2_used = 0;
  int step2_skipped = 0;

  bool ok() const { return status == PipelineStatus::Ok; }
  //! Human-readable multi-line report.
  std::string report_text() const;
};

//! Steps 1 -> 2 -> 3 in order; aborts at the first failing step with the
//! partial result labeled. Deterministic for identical inputs.
CalibrationResult run_pipeline(const CalibrationDataset& dataset,
                               const MaterialTables& base,
                               const CalibrationConfig& cfg);

//! Simulated 0.2%-offset yield stress of one uniaxial compression probe at
//! temperature T, strain rate rate and initial density rho0 (1.0 = dense).
//! Throws DataError when the probe curve never reaches the offset.
double simulate_sigma02(const MaterialTables& tables, double T, double rate,
                        double rho0, const IntegratorOptions& opt);

}  // namespace hipsim
