#pragma once

#include <string>
#include <variant>
#include <vector>

#include "hipsim/mccp.hpp"
#include "hipsim/state.hpp"
#include "hipsim/tables.hpp"
#include "hipsim/tensor.hpp"

namespace hipsim {

//! Stress-controlled HIP cycle: sigma = -P(t) I with furnace temperature T(t).
struct HydrostaticHip {
  HipSchedule schedule;
};

//! Mixed-control isothermal compression at constant axial strain rate
//! (compressive: axial stress negative), lateral faces traction free.
struct UniaxialCompression {
  double strain_rate = 1e-4;  //!< 1/s, > 0 means compressive
  double T = 20.0;            //!< degC
  double duration = 100.0;    //!< s
};

struct LoadingProgram {
  std::variant<HydrostaticHip, UniaxialCompression> mode;
  double rho0 = 1.0;
  double T_ref = 20.0;
};

struct AbouafModel {};
struct MccpModel {
  MccpParams params;
};
using ModelSelection = std::variant<AbouafModel, MccpModel>;

struct IntegratorOptions {
  double dt_min = 1e-3;            //!< s
  double dt_max = 60.0;            //!< s
  double dt_init = 1.0;            //!< s
  double newton_tol = 1e-10;       //!< stress residual, relative to |sigma| + 1 MPa
  double newton_tol_strain = 1e-13;  //!< volumetric strain residual, absolute
  int max_newton = 50;
  double growth = 1.5;
  double halving = 0.5;
  double max_drho = 2e-5;          //!< per-step relative-density change cap
  double max_dstrain = 1e-4;       //!< per-step axial strain cap (uniaxial)
  double sample_dt = 0.0;          //!< min spacing of recorded samples; 0 = all
  //! When set, each accepted step appends its Newton residual-norm history.
  std::vector<std::vector<double>>* newton_residual_log = nullptr;
};

//! Sampled response of one integration run.
struct Trajectory {
  std::vector<double> t;          //!< s
  std::vector<double> T;          //!< degC
  std::vector<double> P;          //!< applied gas pressure, MPa (0 in uniaxial)
  std::vector<SymTensor3> stress; //!< MPa
  std::vector<SymTensor3> strain; //!< total strain
  std::vector<double> rho;
  std::vector<double> sigma_eqv;  //!< MPa (von Mises q for the MCCP model)

  std::size_t size() const { return t.size(); }
};

struct IntegrateResult {
  Trajectory trajectory;
  bool completed = false;
  std::string failure;  //!< empty when completed; names the step and time otherwise
};

//! Backward-Euler integration of one material point under the given loading
//! program. Inelastic increments and material properties are evaluated at the
//! end-of-step state; Newton iterations use the analytic increment
//! derivatives. The step size adapts between dt_min and dt_max: halved on
//! non-convergence or when the per-step caps are exceeded, grown on fast
//! convergence. Landing on schedule breakpoints is exact.
IntegrateResult integrate(const LoadingProgram& program,
                          const ModelSelection& model,
                          const MaterialTables& tables,
                          const IntegratorOptions& options = {});

//! 0.2%-offset yield stress of a uniaxial-compression trajectory: |sigma|
//! at the first crossing of plastic strain (|eps| - |sigma|/E_eff) = 0.002,
//! linearly interpolated between samples. Throws DataError when the curve
//! never reaches the offset.
double extract_yield_stress(const Trajectory& traj, double E_eff);

enum class TrajectoryField { Rho, SigmaEqv };

struct Series {
  std::vector<double> t;
  std::vector<double> value;
};

//! Pointwise arithmetic mean after linear resampling onto a common grid
//! (the first trajectory's grid restricted to the shared time window).
Series mean_series(const std::vector<Trajectory>& trajs, TrajectoryField field);

//! Linear interpolation of a trajectory field at time t.
double sample_field(const Trajectory& traj, TrajectoryField field, double t);

}  // namespace hipsim
