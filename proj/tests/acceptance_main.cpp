// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned here, not configurable.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hipsim/abouaf.hpp"
#include "hipsim/calibration.hpp"
#include "hipsim/config.hpp"
#include "hipsim/csv.hpp"
#include "hipsim/integrator.hpp"
#include "hipsim/mccp.hpp"
#include "fd_oracle.hpp"
#include "rk4_oracle.hpp"
#include "synthetic.hpp"

using namespace hipsim;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

LoadingProgram hip_program(const HipSchedule& sched, double rho0) {
  LoadingProgram prog;
  prog.mode = HydrostaticHip{sched};
  prog.rho0 = rho0;
  prog.T_ref = 20.0;
  return prog;
}

// ---------------------------------------------------------------------------
// 1. All six increment derivatives match central finite differences within
//    1e-5 relative error over 1e4 random admissible states; runtime < 10 s.
// ---------------------------------------------------------------------------
void criterion_1() {
  Timer timer;
  const MaterialTables t = testing::synthetic_tables();
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> comp(-150.0, 150.0);
  std::uniform_real_distribution<double> urho(0.56, 0.995);
  std::uniform_real_distribution<double> uT(550.0, 1150.0);
  std::uniform_real_distribution<double> udt(0.1, 10.0);

  auto near_knot = [&](double rho) {
    for (double k : t.c_table().keys()) {
      if (std::abs(rho - k) < 1e-4) return true;
    }
    for (double k : t.f_table().keys()) {
      if (std::abs(rho - k) < 1e-4) return true;
    }
    return false;
  };

  int tested = 0;
  double worst = 0.0;
  while (tested < 10000) {
    const SymTensor3 sigma{comp(rng), comp(rng), comp(rng),
                           comp(rng), comp(rng), comp(rng)};
    const double rho = urho(rng), T = uT(rng), dt = udt(rng);
    const auto [c, f] = t.lookup_cf(rho);
    const StressInvariants inv = invariants(sigma);
    if (equivalent_stress(inv, c, f) <= 1.0) continue;
    if (inv.q <= 1.0 || near_knot(rho)) continue;
    ++tested;

    const VpDerivatives an = vp_derivatives(sigma, T, rho, t, dt);
    const testing::FdDerivatives fd = testing::fd_derivatives(sigma, T, rho, t, dt);
    const double fdv[6] = {fd.dcr_desw, fd.dcr_dp, fd.dcr_dq,
                           fd.dsw_desw, fd.dsw_dp, fd.dsw_dq};
    const double anv[6] = {an.dcr_desw, an.dcr_dp, an.dcr_dq,
                           an.dsw_desw, an.dsw_dp, an.dsw_dq};
    for (int k = 0; k < 6; ++k) {
      const double err = std::abs(fdv[k] - anv[k]) /
                         std::max({std::abs(fdv[k]), std::abs(anv[k]), 1e-12});
      worst = std::max(worst, err);
    }
  }
  const double secs = timer.seconds();
  report(1, "analytic derivatives vs finite differences",
         worst < 1e-5 && secs < 10.0,
         fmt("10^4 states, worst rel err %.3g (tol 1e-5), %.2f s (limit 10 s)",
             worst, secs));
}

// ---------------------------------------------------------------------------
// 2. Dense uniaxial run converges to |sigma| = (rate/A)^(1/N) within 0.1%;
//    runtime < 1 s.
// ---------------------------------------------------------------------------
void criterion_2() {
  Timer timer;
  const MaterialTables t = testing::dense_power_law(1e-12, 5.0);
  LoadingProgram prog;
  prog.mode = UniaxialCompression{1e-4, 20.0, 400.0};
  prog.rho0 = 1.0;
  const IntegrateResult res = integrate(prog, AbouafModel{}, t);
  const double target = std::pow(1e8, 0.2);
  const double got = res.completed ? std::abs(res.trajectory.stress.back().xx) : 0.0;
  const double rel = std::abs(got - target) / target;
  const double secs = timer.seconds();
  report(2, "dense-limit steady-state stress oracle",
         res.completed && rel < 1e-3 && secs < 1.0,
         fmt("|sigma| = %.4f MPa vs %.4f MPa, rel err %.3g (tol 1e-3), %.2f s",
             got, target, rel, secs));
}

// ---------------------------------------------------------------------------
// 3. Implicit hydrostatic run matches the RK4 reference of the densification
//    ODE within 1e-4 absolute over the full synthetic cycle; runtime < 5 s.
// ---------------------------------------------------------------------------
void criterion_3() {
  Timer timer;
  const MaterialTables t = testing::synthetic_tables();
  const HipSchedule sched = testing::synthetic_schedule();
  const IntegrateResult res = integrate(hip_program(sched, 0.69), AbouafModel{}, t);
  double worst = 1.0;
  if (res.completed) {
    const auto oracle = testing::rk4_density(t, sched, 0.69, sched.end_time(), 0.05);
    worst = 0.0;
    for (std::size_t i = 0; i < res.trajectory.size(); ++i) {
      const double ref = testing::sample_series(oracle, res.trajectory.t[i]);
      worst = std::max(worst, std::abs(res.trajectory.rho[i] - ref));
    }
  }
  const double secs = timer.seconds();
  report(3, "hydrostatic densification vs RK4 oracle",
         res.completed && worst < 1e-4 && secs < 5.0,
         fmt("max |rho_BE - rho_RK4| = %.3g (tol 1e-4), %.2f s", worst, secs));
}

// ---------------------------------------------------------------------------
// 4. |rho - rho0 e^{-eps_vol}| < 1e-10 (with the documented clamp at 1) at
//    every accepted step of every test trajectory.
// ---------------------------------------------------------------------------
void criterion_4() {
  const MaterialTables t = testing::synthetic_tables();
  const HipSchedule sched = testing::synthetic_schedule();
  double worst = 0.0;
  std::size_t steps = 0;

  auto check_traj = [&](const Trajectory& tr, double rho0, double T_ref,
                        bool isothermal) {
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double T = tr.T[i];
      const double rho = tr.rho[i];
      const double E = t.youngs_modulus(rho, T);
      const double nu = t.poisson_ratio(rho, T);
      const double tr_e = tr.stress[i].trace() * (1.0 - 2.0 * nu) / E;
      const double tr_th = isothermal ? 0.0 : 3.0 * t.cte(rho, T) * (T - T_ref);
      const double ev = tr.strain[i].trace() - tr_e - tr_th;
      worst = std::max(worst, std::abs(rho - density_update(rho0, ev)));
      ++steps;
    }
  };

  const auto hip_ab = integrate(hip_program(sched, 0.69), AbouafModel{}, t);
  const auto hip_mc = integrate(hip_program(sched, 0.69),
                                MccpModel{testing::synthetic_mccp(0.69)}, t);
  LoadingProgram uni;
  uni.mode = UniaxialCompression{1e-4, 1100.0, 150.0};
  uni.rho0 = 0.8;
  const auto uni_ab = integrate(uni, AbouafModel{}, t);
  const bool completed = hip_ab.completed && hip_mc.completed && uni_ab.completed;
  if (completed) {
    check_traj(hip_ab.trajectory, 0.69, 20.0, false);
    check_traj(hip_mc.trajectory, 0.69, 20.0, false);
    check_traj(uni_ab.trajectory, 0.8, 20.0, true);
  }
  report(4, "density law rho = rho0 exp(-eps_vol) at every step",
         completed && worst < 1e-10,
         fmt("%zu recorded steps, worst |rho - rho0 e^(-ev)| = %.3g (tol 1e-10)",
             steps, worst));
}

// ---------------------------------------------------------------------------
// 5. Calibration round trip: noise-free recovery of A, N within 1% and c, f
//    within 2% at sampled points; with 2% multiplicative yield noise (N then
//    pinned to the prior, the single-rate workflow) recovery within 10%;
//    runtime < 2 min.
// ---------------------------------------------------------------------------
void criterion_5() {
  Timer timer;
  const MaterialTables truth = testing::synthetic_tables();
  const HipSchedule sched = testing::synthetic_schedule();
  const CalibrationDataset clean = testing::make_synthetic_dataset(truth, sched);

  double worst_AN = 1.0, worst_cf = 1.0, worst_noisy = 1.0;
  std::string detail;
  const CalibrationResult res = run_pipeline(clean, truth, CalibrationConfig{});
  if (res.ok()) {
    worst_AN = 0.0;
    for (std::size_t i = 0; i < res.tables.A_table().size(); ++i) {
      const double T = res.tables.A_table().keys()[i];
      const auto [A_true, N_true] = truth.lookup_AN(T);
      worst_AN = std::max(worst_AN,
                          std::abs(res.tables.A_table().values()[i] - A_true) / A_true);
      worst_AN = std::max(worst_AN,
                          std::abs(res.tables.N_table()(T) - N_true) / N_true);
    }
    worst_cf = 0.0;
    for (const auto& row : clean.porous_yield) {
      if (row.rho >= 1.0) continue;
      const double c_true = truth.lookup_cf(row.rho).first;
      worst_cf = std::max(worst_cf, std::abs(res.tables.lookup_cf(row.rho).first -
                                             c_true) / c_true);
    }
    const auto& ft = res.tables.f_table();
    for (std::size_t i = 0; i + 1 < ft.size(); ++i) {
      const double rho = ft.keys()[i];
      if (rho > 0.985) continue;  // f -> 0 at the dense limit: ill-conditioned
      const double f_true = truth.lookup_cf(rho).second;
      if (f_true < 1e-3) continue;
      worst_cf = std::max(worst_cf, std::abs(ft.values()[i] - f_true) / f_true);
    }
  }

  const CalibrationDataset noisy = testing::noisy_yields(clean, 0.02, 20240401);
  CalibrationConfig noisy_cfg;
  noisy_cfg.seed.fix_N = true;
  noisy_cfg.seed.N0_T = truth.N_table().keys();
  noisy_cfg.seed.N0_values = truth.N_table().values();
  noisy_cfg.yield_rel_tol = 0.05;
  const CalibrationResult res_noisy = run_pipeline(noisy, truth, noisy_cfg);
  if (res_noisy.ok()) {
    worst_noisy = 0.0;
    for (std::size_t i = 0; i < res_noisy.tables.A_table().size(); ++i) {
      const double T = res_noisy.tables.A_table().keys()[i];
      const auto [A_true, N_true] = truth.lookup_AN(T);
      worst_noisy = std::max(
          worst_noisy,
          std::abs(res_noisy.tables.A_table().values()[i] - A_true) / A_true);
      worst_noisy = std::max(
          worst_noisy, std::abs(res_noisy.tables.N_table()(T) - N_true) / N_true);
    }
    for (const auto& row : noisy.porous_yield) {
      if (row.rho >= 1.0) continue;
      const double c_true = truth.lookup_cf(row.rho).first;
      worst_noisy = std::max(worst_noisy,
                             std::abs(res_noisy.tables.lookup_cf(row.rho).first -
                                      c_true) / c_true);
    }
  }
  const double secs = timer.seconds();
  report(5, "three-step calibration round trip",
         res.ok() && res_noisy.ok() && worst_AN < 0.01 && worst_cf < 0.02 &&
             worst_noisy < 0.10 && secs < 120.0,
         fmt("noise-free: A/N %.3g (tol 0.01), c/f %.3g (tol 0.02); "
             "2%% noise: %.3g (tol 0.10); %.1f s (limit 120 s)",
             worst_AN, worst_cf, worst_noisy, secs));
}

// ---------------------------------------------------------------------------
// 6. Visco-plastic runs from rho0 = 0.60 and 0.69 both reach rho >= 0.99
//    before the end of the pressure hold and coincide within 0.01 afterwards.
// ---------------------------------------------------------------------------
void criterion_6() {
  const MaterialTables t = testing::synthetic_tables();
  const HipSchedule sched = testing::synthetic_schedule();
  const double hold_end = 14400.0;
  const auto r60 = integrate(hip_program(sched, 0.60), AbouafModel{}, t);
  const auto r69 = integrate(hip_program(sched, 0.69), AbouafModel{}, t);

  bool pass = r60.completed && r69.completed;
  double t99_60 = 1e300, t99_69 = 1e300, t_star = -1.0, max_after = 0.0;
  if (pass) {
    auto t99 = [](const Trajectory& tr) {
      for (std::size_t i = 0; i < tr.size(); ++i) {
        if (tr.rho[i] >= 0.99) return tr.t[i];
      }
      return 1e300;
    };
    t99_60 = t99(r60.trajectory);
    t99_69 = t99(r69.trajectory);
    for (double tt = 0.0; tt <= sched.end_time(); tt += 5.0) {
      const double gap = sample_field(r69.trajectory, TrajectoryField::Rho, tt) -
                         sample_field(r60.trajectory, TrajectoryField::Rho, tt);
      if (t_star < 0.0 && gap <= 0.01) t_star = tt;
      if (t_star >= 0.0) max_after = std::max(max_after, gap);
    }
    pass = t99_60 < hold_end && t99_69 < hold_end && t_star >= 0.0 &&
           t_star < hold_end && max_after <= 0.01 + 1e-9;
  }
  report(6, "initial-density self-adjustment of the visco-plastic model", pass,
         fmt("rho>=0.99 at %.0f s / %.0f s (hold ends 14400 s); curves within "
             "0.01 from %.0f s on (max gap after: %.4g)",
             t99_60, t99_69, t_star, max_after));
}

// ---------------------------------------------------------------------------
// 7. MCCP runs with identical tables scale exactly with the initial density:
//    final rho ratio equals 0.60/0.69 within 1e-6.
// ---------------------------------------------------------------------------
void criterion_7() {
  const MaterialTables t = testing::synthetic_tables();
  const HipSchedule sched = testing::synthetic_schedule();
  const auto r60 = integrate(hip_program(sched, 0.60),
                             MccpModel{testing::synthetic_mccp(0.60)}, t);
  const auto r69 = integrate(hip_program(sched, 0.69),
                             MccpModel{testing::synthetic_mccp(0.69)}, t);
  bool pass = r60.completed && r69.completed;
  double diff = 1.0;
  if (pass) {
    const double ratio = r60.trajectory.rho.back() / r69.trajectory.rho.back();
    diff = std::abs(ratio - 0.60 / 0.69);
    pass = diff < 1e-6;
  }
  report(7, "rate-independent model scales with the initial density", pass,
         fmt("final rho ratio deviates from 0.60/0.69 by %.3g (tol 1e-6)", diff));
}

// ---------------------------------------------------------------------------
// 8. MCCP return map: |F| < 1e-8 after plastic steps, associativity angle
//    < 1e-6 rad, and dt-subdivision invariance < 1e-8 relative on the
//    proportional (hydrostatic) load path.
// ---------------------------------------------------------------------------
void criterion_8() {
  const MaterialTables tables = testing::synthetic_tables();
  const MccpParams params = testing::synthetic_mccp(0.69);

  double worst_F = 0.0, worst_angle = 0.0;
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> uvol(-3e-3, -2e-4);
  std::uniform_real_distribution<double> udev(-6e-4, 6e-4);
  PointState st;
  st.rho = 0.69;
  int plastic_steps = 0;
  bool converged = true;
  for (int i = 0; i < 200; ++i) {
    const double ev = uvol(rng) / 3.0;
    const SymTensor3 deps{ev + udev(rng), ev + udev(rng), ev + udev(rng),
                          0.5 * udev(rng), 0.5 * udev(rng), 0.5 * udev(rng)};
    const MccpStepResult res = mccp_step(st, deps, 900.0, params, tables);
    converged = converged && res.converged;
    if (!res.converged) break;
    if (res.plastic) {
      ++plastic_steps;
      const StressInvariants inv = invariants(res.state.stress);
      const double a = params.semiaxis(res.state.eps_vp.trace());
      const double M = params.M(st.rho, 900.0);
      worst_F = std::max(worst_F, std::abs(yield_value(inv, a, M)));
      const double denom =
          res.plastic_increment.norm() * res.flow_direction.norm();
      if (denom > 0.0) {
        const double c = std::clamp(
            res.plastic_increment.ddot(res.flow_direction) / denom, -1.0, 1.0);
        worst_angle = std::max(worst_angle, std::acos(c));
      }
    }
    st = res.state;
  }

  // Proportional hydrostatic path: one-shot vs 1000 monotone substeps.
  const double ev_direct = mccp_hydrostatic_consistency(95.0, 0.0, params);
  double ev_sub = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    ev_sub = mccp_hydrostatic_consistency(95.0 * i / 1000.0, ev_sub, params);
  }
  const double sub_rel = std::abs(ev_sub - ev_direct) / std::abs(ev_direct);

  report(8, "MCCP return map consistency",
         converged && plastic_steps > 50 && worst_F < 1e-8 &&
             worst_angle < 1e-6 && sub_rel < 1e-8,
         fmt("%d plastic steps: max |F| %.3g (tol 1e-8), max angle %.3g rad "
             "(tol 1e-6), subdivision rel diff %.3g (tol 1e-8)",
             plastic_steps, worst_F, worst_angle, sub_rel));
}

// ---------------------------------------------------------------------------
// 9. Repeated calibrate and simulate runs with identical inputs produce
//    byte-identical outputs.
// ---------------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void criterion_9() {
  const fs::path tmp = fs::temp_directory_path() /
                       ("hipsim_acc9_" + std::to_string(::getpid()));
  std::error_code ec;
  fs::remove_all(tmp, ec);
  fs::create_directories(tmp);

  auto cli = [&](const std::string& args) {
    const std::string cmd = std::string(HIPSIM_CLI_PATH) + " " + args + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };

  const std::string sim_cfg = testing::data_path("config_simulate_both.json");
  const std::string cal_cfg = testing::data_path("config_calibrate.json");
  bool pass = cli("simulate --config " + sim_cfg + " --out " + (tmp / "s1").string()) == 0 &&
              cli("simulate --config " + sim_cfg + " --out " + (tmp / "s2").string()) == 0 &&
              cli("calibrate --config " + cal_cfg + " --out " + (tmp / "c1").string()) == 0 &&
              cli("calibrate --config " + cal_cfg + " --out " + (tmp / "c2").string()) == 0;
  std::string detail = pass ? "" : "CLI run failed; ";
  if (pass) {
    for (const char* name : {"trajectory_abouaf.csv", "trajectory_mccp.csv", "summary.txt"}) {
      if (slurp(tmp / "s1" / name) != slurp(tmp / "s2" / name)) {
        pass = false;
        detail += std::string(name) + " differs; ";
      }
    }
    for (const char* name : {"tables_calibrated.json", "calibration_report.txt",
                             "calibration_report.json"}) {
      if (slurp(tmp / "c1" / name) != slurp(tmp / "c2" / name)) {
        pass = false;
        detail += std::string(name) + " differs; ";
      }
    }
  }
  fs::remove_all(tmp, ec);
  report(9, "deterministic byte-identical reruns", pass,
         pass ? "simulate x2 and calibrate x2 outputs identical" : detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
