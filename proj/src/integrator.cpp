#include "hipsim/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "hipsim/abouaf.hpp"
#include "hipsim/errors.hpp"

namespace hipsim {

namespace {

constexpr double kTimeEps = 1e-9;

struct SampleRecorder {
  Trajectory traj;
  double sample_dt = 0.0;
  double last_t = -1e300;

  void record(double t, double T, double P, const SymTensor3& stress,
              const SymTensor3& strain, double rho, double seq, bool force) {
    if (!force && sample_dt > 0.0 && t - last_t < sample_dt - kTimeEps) return;
    traj.t.push_back(t);
    traj.T.push_back(T);
    traj.P.push_back(P);
    traj.stress.push_back(stress);
    traj.strain.push_back(strain);
    traj.rho.push_back(rho);
    traj.sigma_eqv.push_back(seq);
    last_t = t;
  }
};

// Schedule knots and program end define exact landing times for the stepper.
std::vector<double> breakpoints(const HipSchedule& sched) {
  std::set<double> pts(sched.pressure_profile().keys().begin(),
                       sched.pressure_profile().keys().end());
  pts.insert(sched.temperature_profile().keys().begin(),
             sched.temperature_profile().keys().end());
  return {pts.begin(), pts.end()};
}

double clip_to_breakpoint(double t, double dt, const std::vector<double>& brk,
                          double t_end) {
  double dt_eff = std::min(dt, t_end - t);
  for (double b : brk) {
    if (b > t + kTimeEps) {
      dt_eff = std::min(dt_eff, b - t);
      break;
    }
  }
  return dt_eff;
}

// ---------------------------------------------------------------------------
// Hydrostatic HIP, visco-plastic model.
//
// With stress prescribed as -P(t) I the only implicit unknown per step is the
// swelling-strain increment: g(d) = d - d_sw(rho(esw + d)) = 0, solved by
// Newton with the analytic d(d_sw)/d(esw) derivative.
// ---------------------------------------------------------------------------

struct HydroAbouafState {
  double esw = 0.0;  // accumulated volumetric vp strain (negative in compaction)
  double rho = 1.0;
};

struct StepOutcome {
  bool ok = false;
  int iterations = 0;
  std::vector<double> residuals;
};

StepOutcome hydro_abouaf_step(HydroAbouafState& st, double rho0, double P1,
                              double T1, const MaterialTables& tables,
                              double dt, const IntegratorOptions& opt) {
  StepOutcome res;
  const SymTensor3 sigma1 = SymTensor3::iso(-P1);
  double d = 0.0;
  for (res.iterations = 0; res.iterations < opt.max_newton; ++res.iterations) {
    const double rho1 = density_update(rho0, st.esw + d);
    const VpIncrement inc = vp_increments(sigma1, T1, rho1, tables, dt);
    const double g = d - inc.d_sw;
    res.residuals.push_back(std::abs(g));
    if (std::abs(g) < opt.newton_tol_strain) {
      st.esw += d;
      st.rho = density_update(rho0, st.esw);
      res.ok = true;
      return res;
    }
    double slope = 1.0;
    const auto [c1, f1] = tables.lookup_cf(rho1);
    const StressInvariants inv1 = invariants(sigma1);
    if (equivalent_stress(inv1, c1, f1) > 0.0 && rho1 < 1.0) {
      slope -= vp_derivatives(sigma1, T1, rho1, tables, dt).dsw_desw;
    }
    d -= g / slope;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Uniaxial compression, visco-plastic model.
//
// Unknowns per step are the axial stress and the lateral strain; the residual
// enforces the axial elastic relation and the traction-free lateral faces
// with the vp increment evaluated implicitly at the end-of-step state. The
// 2x2 Jacobian is assembled from the analytic increment derivatives.
// ---------------------------------------------------------------------------

struct UniaxAbouafState {
  double sigma_ax = 0.0;
  double eps_lat = 0.0;
  SymTensor3 eps_vp;
  double rho = 1.0;
};

struct UniaxEval {
  double r_ax = 0.0, r_lat = 0.0;
  double d_sw = 0.0, d_cr = 0.0;
  SymTensor3 eps_vp_end;
  double rho_end = 1.0;
  // d(residual)/d(sigma_ax), d(residual)/d(eps_lat)
  double J[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

// Inner implicit solve for the swelling increment at fixed axial stress.
double solve_dsw(double sigma_ax, double esw0, double rho0, double T,
                 const MaterialTables& tables, double dt,
                 const IntegratorOptions& opt) {
  const SymTensor3 sigma = SymTensor3::diag(sigma_ax, 0.0, 0.0);
  double d = 0.0;
  for (int i = 0; i < opt.max_newton; ++i) {
    const double rho1 = density_update(rho0, esw0 + d);
    const VpIncrement inc = vp_increments(sigma, T, rho1, tables, dt);
    const double g = d - inc.d_sw;
    if (std::abs(g) < opt.newton_tol_strain) return d;
    double slope = 1.0;
    const auto [c1, f1] = tables.lookup_cf(rho1);
    if (equivalent_stress(invariants(sigma), c1, f1) > 0.0 && rho1 < 1.0) {
      slope -= vp_derivatives(sigma, T, rho1, tables, dt).dsw_desw;
    }
    d -= g / slope;
  }
  return d;
}

UniaxEval uniax_abouaf_eval(const UniaxAbouafState& st0, double rho0,
                            double sigma_ax, double eps_lat, double eps_ax,
                            double T, const MaterialTables& tables, double dt,
                            const IntegratorOptions& opt) {
  UniaxEval ev;
  const SymTensor3 sigma = SymTensor3::diag(sigma_ax, 0.0, 0.0);
  const double esw0 = st0.eps_vp.trace();

  ev.d_sw = solve_dsw(sigma_ax, esw0, rho0, T, tables, dt, opt);
  ev.rho_end = density_update(rho0, esw0 + ev.d_sw);
  const auto [c, f] = tables.lookup_cf(ev.rho_end);
  const StressInvariants inv = invariants(sigma);
  const double seq = equivalent_stress(inv, c, f);
  const auto [A, N] = tables.lookup_AN(T);
  ev.d_cr = (seq > 0.0) ? c * inv.q * A * std::pow(seq, N - 1.0) * dt : 0.0;

  // n = (3/2) s / q: constant direction diag(-1, 1/2, 1/2) in compression.
  const SymTensor3 n = (inv.q > 0.0) ? sigma.deviator() * (1.5 / inv.q)
                                     : SymTensor3::zero();
  ev.eps_vp_end = st0.eps_vp + SymTensor3::iso(ev.d_sw / 3.0) + n * ev.d_cr;

  const SymTensor3 eps_total = SymTensor3::diag(eps_ax, eps_lat, eps_lat);
  const SymTensor3 eps_e = eps_total - ev.eps_vp_end;
  const double E = tables.youngs_modulus(ev.rho_end, T);
  const double nu = tables.poisson_ratio(ev.rho_end, T);
  const auto [lambda, mu] = lame_params(E, nu);
  const double tr_e = eps_e.trace();
  ev.r_ax = lambda * tr_e + 2.0 * mu * eps_e.xx - sigma_ax;
  ev.r_lat = lambda * tr_e + 2.0 * mu * eps_e.yy;

  // Jacobian. Increment sensitivities to sigma_ax come through (p, q, esw):
  // p = -sigma_ax/3, q = |sigma_ax|.
  double ddsw = 0.0, ddcr = 0.0, drho = 0.0;
  if (seq > 0.0 && ev.rho_end < 1.0) {
    const VpDerivatives vd = vp_derivatives(sigma, T, ev.rho_end, tables, dt);
    const double dp = -1.0 / 3.0;
    const double dq = (sigma_ax < 0.0) ? -1.0 : 1.0;
    const double denom = 1.0 - vd.dsw_desw;
    ddsw = (vd.dsw_dp * dp + vd.dsw_dq * dq) / denom;
    ddcr = vd.dcr_dp * dp + vd.dcr_dq * dq + vd.dcr_desw * ddsw;
    drho = -ev.rho_end * ddsw;
  } else if (seq > 0.0) {
    const VpDerivatives vd = vp_derivatives(sigma, T, ev.rho_end, tables, dt);
    ddcr = vd.dcr_dp * (-1.0 / 3.0) + vd.dcr_dq * ((sigma_ax < 0.0) ? -1.0 : 1.0);
  }

  const double dlam_drho = [&] {
    const double dE = tables.youngs_modulus_slope_rho(ev.rho_end, T);
    const double dnu = tables.poisson_ratio_slope_rho(ev.rho_end, T);
    const double denom = (1.0 + nu) * (1.0 - 2.0 * nu);
    const double dlam_dE = nu / denom;
    const double dlam_dnu = E * (1.0 + 2.0 * nu * nu) / (denom * denom);
    return dlam_dE * dE + dlam_dnu * dnu;
  }();
  const double dmu_drho = [&] {
    const double dE = tables.youngs_modulus_slope_rho(ev.rho_end, T);
    const double dnu = tables.poisson_ratio_slope_rho(ev.rho_end, T);
    return dE / (2.0 * (1.0 + nu)) - E * dnu / (2.0 * (1.0 + nu) * (1.0 + nu));
  }();

  const double n_ax = n.xx, n_lat = n.yy;
  const double devp_ax = ddsw / 3.0 + ddcr * n_ax;
  const double devp_lat = ddsw / 3.0 + ddcr * n_lat;
  const double dtr = ddsw;  // trace of vp increment sensitivity
  ev.J[0][0] = -lambda * dtr - 2.0 * mu * devp_ax - 1.0 +
               drho * (dlam_drho * tr_e + 2.0 * dmu_drho * eps_e.xx);
  ev.J[1][0] = -lambda * dtr - 2.0 * mu * devp_lat +
               drho * (dlam_drho * tr_e + 2.0 * dmu_drho * eps_e.yy);
  ev.J[0][1] = 2.0 * lambda;
  ev.J[1][1] = 2.0 * lambda + 2.0 * mu;
  return ev;
}

StepOutcome uniax_abouaf_step(UniaxAbouafState& st, double rho0, double eps_ax,
                              double T, const MaterialTables& tables, double dt,
                              const IntegratorOptions& opt) {
  StepOutcome res;
  // Elastic predictor from the previous converged state.
  const double E = tables.youngs_modulus(st.rho, T);
  const double nu = tables.poisson_ratio(st.rho, T);
  const double eps_ax_prev = st.eps_vp.xx +
      (st.sigma_ax != 0.0 ? st.sigma_ax / E : 0.0);
  const double deps = eps_ax - eps_ax_prev;
  double sigma_ax = st.sigma_ax + E * deps;
  double eps_lat = st.eps_lat - nu * deps;

  for (res.iterations = 0; res.iterations < opt.max_newton; ++res.iterations) {
    const UniaxEval ev =
        uniax_abouaf_eval(st, rho0, sigma_ax, eps_lat, eps_ax, T, tables, dt, opt);
    const double rnorm = std::max(std::abs(ev.r_ax), std::abs(ev.r_lat));
    res.residuals.push_back(rnorm);
    if (rnorm < opt.newton_tol * (std::abs(sigma_ax) + 1.0)) {
      st.sigma_ax = sigma_ax;
      st.eps_lat = eps_lat;
      st.eps_vp = ev.eps_vp_end;
      st.rho = ev.rho_end;
      res.ok = true;
      return res;
    }
    const double det = ev.J[0][0] * ev.J[1][1] - ev.J[0][1] * ev.J[1][0];
    if (det == 0.0 || !std::isfinite(det)) return res;
    const double dx0 = (ev.r_ax * ev.J[1][1] - ev.r_lat * ev.J[0][1]) / det;
    const double dx1 = (ev.r_lat * ev.J[0][0] - ev.r_ax * ev.J[1][0]) / det;
    sigma_ax -= dx0;
    eps_lat -= dx1;
    if (!std::isfinite(sigma_ax) || !std::isfinite(eps_lat)) return res;
  }
  return res;
}

// ---------------------------------------------------------------------------

IntegrateResult integrate_hydro_abouaf(const HydrostaticHip& hip, double rho0,
                                       double T_ref, const MaterialTables& tables,
                                       const IntegratorOptions& opt) {
  IntegrateResult out;
  SampleRecorder rec;
  rec.sample_dt = opt.sample_dt;
  const HipSchedule& sched = hip.schedule;
  const auto brk = breakpoints(sched);
  const double t_end = sched.end_time();

  HydroAbouafState st;
  st.rho = rho0;
  double t = 0.0;
  double dt = std::clamp(opt.dt_init, opt.dt_min, opt.dt_max);

  auto record_state = [&](double tt, bool force) {
    const double P = sched.pressure(tt);
    const double T = sched.temperature(tt);
    const SymTensor3 sigma = SymTensor3::iso(-P);
    const auto [c, f] = tables.lookup_cf(st.rho);
    const double seq = equivalent_stress(invariants(sigma), c, f);
    const double K = tables.youngs_modulus(st.rho, T) /
                     (3.0 * (1.0 - 2.0 * tables.poisson_ratio(st.rho, T)));
    const SymTensor3 eps_e = SymTensor3::iso(-P / (3.0 * K));
    const SymTensor3 eps_th = thermal_strain(T, T_ref, st.rho, tables);
    const SymTensor3 eps_vp = SymTensor3::iso(st.esw / 3.0);
    rec.record(tt, T, P, sigma, eps_e + eps_th + eps_vp, st.rho, seq, force);
  };
  record_state(0.0, true);

  while (t < t_end - kTimeEps) {
    double dt_eff = clip_to_breakpoint(t, std::min(dt, opt.dt_max), brk, t_end);
    const double rho_prev = st.rho;
    bool accepted = false;
    StepOutcome so;
    while (!accepted) {
      HydroAbouafState trial = st;
      so = hydro_abouaf_step(trial, rho0, sched.pressure(t + dt_eff),
                             sched.temperature(t + dt_eff), tables, dt_eff, opt);
      if (so.ok && std::abs(trial.rho - st.rho) <= opt.max_drho * 1.0001) {
        st = trial;
        accepted = true;
      } else {
        dt_eff *= opt.halving;
        if (dt_eff < opt.dt_min) {
          out.failure = "hydrostatic step failed to converge at t = " +
                        std::to_string(t) + " s (dt underflow)";
          out.trajectory = std::move(rec.traj);
          return out;
        }
      }
    }
    t += dt_eff;
    const bool at_break = std::any_of(brk.begin(), brk.end(), [&](double b) {
      return std::abs(b - t) < kTimeEps;
    });
    record_state(t, at_break || t >= t_end - kTimeEps);
    if (opt.newton_residual_log) opt.newton_residual_log->push_back(so.residuals);

    const double drho = std::abs(st.rho - rho_prev);
    double fac = opt.growth;
    if (drho > 0.0) fac = std::min(fac, 0.9 * opt.max_drho / drho);
    if (so.iterations > 8) fac = std::min(fac, 1.0);
    dt = std::clamp(dt_eff * std::max(fac, opt.halving), opt.dt_min, opt.dt_max);
  }
  out.completed = true;
  out.trajectory = std::move(rec.traj);
  return out;
}

IntegrateResult integrate_uniax_abouaf(const UniaxialCompression& prog,
                                       double rho0, const MaterialTables& tables,
                                       const IntegratorOptions& opt) {
  IntegrateResult out;
  SampleRecorder rec;
  rec.sample_dt = opt.sample_dt;
  const double t_end = prog.duration;
  const double T = prog.T;

  UniaxAbouafState st;
  st.rho = rho0;
  double t = 0.0;
  double dt = std::clamp(std::min(opt.dt_init, opt.max_dstrain / prog.strain_rate),
                         opt.dt_min, opt.dt_max);

  auto record_state = [&](double tt, bool force) {
    const SymTensor3 sigma = SymTensor3::diag(st.sigma_ax, 0.0, 0.0);
    const auto [c, f] = tables.lookup_cf(st.rho);
    const double seq = equivalent_stress(invariants(sigma), c, f);
    const SymTensor3 strain =
        SymTensor3::diag(-prog.strain_rate * tt, st.eps_lat, st.eps_lat);
    rec.record(tt, T, 0.0, sigma, strain, st.rho, seq, force);
  };
  record_state(0.0, true);

  while (t < t_end - kTimeEps) {
    double dt_eff = std::min({dt, opt.dt_max, t_end - t,
                              opt.max_dstrain / prog.strain_rate});
    bool accepted = false;
    StepOutcome so;
    while (!accepted) {
      UniaxAbouafState trial = st;
      const double eps_ax = -prog.strain_rate * (t + dt_eff);
      so = uniax_abouaf_step(trial, rho0, eps_ax, T, tables, dt_eff, opt);
      if (so.ok && std::abs(trial.rho - st.rho) <= opt.max_drho * 1.0001) {
        st = trial;
        accepted = true;
      } else {
        dt_eff *= opt.halving;
        if (dt_eff < opt.dt_min) {
          out.failure = "uniaxial step failed to converge at t = " +
                        std::to_string(t) + " s (dt underflow)";
          out.trajectory = std::move(rec.traj);
          return out;
        }
      }
    }
    t += dt_eff;
    record_state(t, t >= t_end - kTimeEps);
    if (opt.newton_residual_log) opt.newton_residual_log->push_back(so.residuals);
    double fac = (so.iterations <= 6) ? opt.growth : 1.0;
    dt = std::clamp(dt_eff * fac, opt.dt_min,
                    std::min(opt.dt_max, opt.max_dstrain / prog.strain_rate));
  }
  out.completed = true;
  out.trajectory = std::move(rec.traj);
  return out;
}

IntegrateResult integrate_hydro_mccp(const HydrostaticHip& hip,
                                     const MccpParams& params_in, double rho0,
                                     double T_ref, const MaterialTables& tables,
                                     const IntegratorOptions& opt) {
  IntegrateResult out;
  SampleRecorder rec;
  rec.sample_dt = opt.sample_dt;
  const HipSchedule& sched = hip.schedule;
  const auto brk = breakpoints(sched);
  const double t_end = sched.end_time();
  const MccpParams params(params_in.M_table(), params_in.hardening_table(), rho0);

  double ev = 0.0;  // plastic volumetric strain, negative in compaction
  double rho = rho0;
  double t = 0.0;
  double dt = std::clamp(opt.dt_init, opt.dt_min, opt.dt_max);

  auto record_state = [&](double tt, bool force) {
    const double P = sched.pressure(tt);
    const double T = sched.temperature(tt);
    const SymTensor3 sigma = SymTensor3::iso(-P);
    const double K = tables.youngs_modulus(rho, T) /
                     (3.0 * (1.0 - 2.0 * tables.poisson_ratio(rho, T)));
    const SymTensor3 eps_e = SymTensor3::iso(-P / (3.0 * K));
    const SymTensor3 eps_th = thermal_strain(T, T_ref, rho, tables);
    const SymTensor3 eps_vp = SymTensor3::iso(ev / 3.0);
    rec.record(tt, T, P, sigma, eps_e + eps_th + eps_vp, rho,
               invariants(sigma).q, force);
  };
  record_state(0.0, true);

  while (t < t_end - kTimeEps) {
    double dt_eff = clip_to_breakpoint(t, std::min(dt, opt.dt_max), brk, t_end);
    const double rho_prev = rho;
    bool accepted = false;
    while (!accepted) {
      const double P1 = sched.pressure(t + dt_eff);
      double ev_trial;
      try {
        ev_trial = mccp_hydrostatic_consistency(P1, ev, params);
      } catch (const DataError& e) {
        out.failure = std::string("mccp step failed at t = ") +
                      std::to_string(t + dt_eff) + " s: " + e.what();
        out.trajectory = std::move(rec.traj);
        return out;
      }
      const double rho_trial = density_update(rho0, ev_trial);
      if (std::abs(rho_trial - rho) <= opt.max_drho * 1.0001 ||
          dt_eff * opt.halving < opt.dt_min) {
        ev = ev_trial;
        rho = rho_trial;
        accepted = true;
      } else {
        dt_eff *= opt.halving;
      }
    }
    t += dt_eff;
    const bool at_break = std::any_of(brk.begin(), brk.end(), [&](double b) {
      return std::abs(b - t) < kTimeEps;
    });
    record_state(t, at_break || t >= t_end - kTimeEps);
    const double drho = std::abs(rho - rho_prev);
    double fac = opt.growth;
    if (drho > 0.0) fac = std::min(fac, 0.9 * opt.max_drho / drho);
    dt = std::clamp(dt_eff * std::max(fac, opt.halving), opt.dt_min, opt.dt_max);
  }
  out.completed = true;
  out.trajectory = std::move(rec.traj);
  return out;
}

IntegrateResult integrate_uniax_mccp(const UniaxialCompression& prog,
                                     const MccpParams& params_in, double rho0,
                                     const MaterialTables& tables,
                                     const IntegratorOptions& opt) {
  IntegrateResult out;
  SampleRecorder rec;
  rec.sample_dt = opt.sample_dt;
  const double t_end = prog.duration;
  const double T = prog.T;
  const MccpParams params(params_in.M_table(), params_in.hardening_table(), rho0);

  PointState st;
  st.rho = rho0;
  st.T = T;
  double eps_lat = 0.0;
  double t = 0.0;
  double dt = std::clamp(std::min(opt.dt_init, opt.max_dstrain / prog.strain_rate),
                         opt.dt_min, opt.dt_max);

  auto record_state = [&](double tt, bool force) {
    const SymTensor3 strain =
        SymTensor3::diag(-prog.strain_rate * tt, eps_lat, eps_lat);
    rec.record(tt, T, 0.0, st.stress, strain, st.rho, invariants(st.stress).q,
               force);
  };
  record_state(0.0, true);

  while (t < t_end - kTimeEps) {
    double dt_eff = std::min({dt, opt.dt_max, t_end - t,
                              opt.max_dstrain / prog.strain_rate});
    bool accepted = false;
    while (!accepted) {
      const double eps_ax = -prog.strain_rate * (t + dt_eff);
      const double deps_ax = eps_ax + prog.strain_rate * t;
      // Newton on the lateral strain so the returned lateral stress vanishes.
      const double nu = tables.poisson_ratio(st.rho, T);
      double el = eps_lat - nu * deps_ax;
      MccpStepResult step;
      bool solved = false;
      for (int it = 0; it < opt.max_newton; ++it) {
        const SymTensor3 deps =
            SymTensor3::diag(deps_ax, el - eps_lat, el - eps_lat);
        step = mccp_step(st, deps, T, params, tables);
        if (!step.converged) break;
        const double r = step.state.stress.yy;
        if (std::abs(r) < opt.newton_tol * (std::abs(step.state.stress.xx) + 1.0)) {
          solved = true;
          break;
        }
        const double h = 1e-9 * std::max(1.0, std::abs(el));
        const SymTensor3 deps2 =
            SymTensor3::diag(deps_ax, el + h - eps_lat, el + h - eps_lat);
        const MccpStepResult step2 = mccp_step(st, deps2, T, params, tables);
        const double dr = (step2.state.stress.yy - r) / h;
        if (dr == 0.0 || !std::isfinite(dr)) break;
        el -= r / dr;
      }
      if (solved && std::abs(step.state.rho - st.rho) <= opt.max_drho * 1.0001) {
        st = step.state;
        eps_lat = el;
        accepted = true;
      } else {
        dt_eff *= opt.halving;
        if (dt_eff < opt.dt_min) {
          out.failure = "mccp uniaxial step failed at t = " + std::to_string(t) +
                        " s (dt underflow)";
          out.trajectory = std::move(rec.traj);
          return out;
        }
      }
    }
    t += dt_eff;
    record_state(t, t >= t_end - kTimeEps);
    dt = std::clamp(dt_eff * opt.growth, opt.dt_min,
                    std::min(opt.dt_max, opt.max_dstrain / prog.strain_rate));
  }
  out.completed = true;
  out.trajectory = std::move(rec.traj);
  return out;
}

}  // namespace

IntegrateResult integrate(const LoadingProgram& program,
                          const ModelSelection& model,
                          const MaterialTables& tables,
                          const IntegratorOptions& options) {
  if (options.dt_min > options.dt_max || options.dt_min <= 0.0) {
    throw ConfigError("integrator: requires 0 < dt_min <= dt_max");
  }
  if (!(program.rho0 > 0.0 && program.rho0 <= 1.0)) {
    throw ConfigError("integrator: rho0 must lie in (0, 1]");
  }
  if (const auto* uni = std::get_if<UniaxialCompression>(&program.mode)) {
    if (!(uni->strain_rate > 0.0) || !(uni->duration > 0.0)) {
      throw ConfigError("integrator: strain rate and duration must be > 0");
    }
  }
  return std::visit(
      [&](const auto& mode) -> IntegrateResult {
        using ModeT = std::decay_t<decltype(mode)>;
        if (std::holds_alternative<AbouafModel>(model)) {
          if constexpr (std::is_same_v<ModeT, HydrostaticHip>) {
            return integrate_hydro_abouaf(mode, program.rho0, program.T_ref,
                                          tables, options);
          } else {
            return integrate_uniax_abouaf(mode, program.rho0, tables, options);
          }
        } else {
          const MccpParams& p = std::get<MccpModel>(model).params;
          if constexpr (std::is_same_v<ModeT, HydrostaticHip>) {
            return integrate_hydro_mccp(mode, p, program.rho0, program.T_ref,
                                        tables, options);
          } else {
            return integrate_uniax_mccp(mode, p, program.rho0, tables, options);
          }
        }
      },
      program.mode);
}

double extract_yield_stress(const Trajectory& traj, double E_eff) {
  if (traj.size() < 2) throw DataError("yield extraction: trajectory too short");
  if (!(E_eff > 0.0)) throw DataError("yield extraction: E_eff must be > 0");
  double prev_pl = 0.0, prev_sig = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double sig = std::abs(traj.stress[i].xx);
    const double eps = std::abs(traj.strain[i].xx);
    const double pl = eps - sig / E_eff;
    if (i > 0 && pl >= 0.002 && prev_pl < 0.002) {
      const double w = (0.002 - prev_pl) / (pl - prev_pl);
      return prev_sig + w * (sig - prev_sig);
    }
    prev_pl = pl;
    prev_sig = sig;
  }
  throw DataError("yield extraction: curve never reaches 0.2% plastic strain");
}

double sample_field(const Trajectory& traj, TrajectoryField field, double t) {
  const std::vector<double>& v =
      (field == TrajectoryField::Rho) ? traj.rho : traj.sigma_eqv;
  const std::vector<double>& ts = traj.t;
  if (ts.empty()) throw DataError("sample_field: empty trajectory");
  if (t <= ts.front()) return v.front();
  if (t >= ts.back()) return v.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - ts.begin()) - 1;
  const double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
  return v[i] + w * (v[i + 1] - v[i]);
}

Series mean_series(const std::vector<Trajectory>& trajs, TrajectoryField field) {
  if (trajs.empty()) throw DataError("mean_series: no trajectories");
  double t0 = trajs.front().t.front();
  double t1 = trajs.front().t.back();
  for (const auto& tr : trajs) {
    if (tr.t.empty()) throw DataError("mean_series: empty trajectory");
    t0 = std::max(t0, tr.t.front());
    t1 = std::min(t1, tr.t.back());
  }
  Series out;
  for (double t : trajs.front().t) {
    if (t < t0 - kTimeEps || t > t1 + kTimeEps) continue;
    double sum = 0.0;
    for (const auto& tr : trajs) sum += sample_field(tr, field, t);
    out.t.push_back(t);
    out.value.push_back(sum / static_cast<double>(trajs.size()));
  }
  return out;
}

}  // namespace hipsim
