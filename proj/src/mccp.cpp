#include "hipsim/mccp.hpp"

#include <algorithm>
#include <cmath>

#include "hipsim/abouaf.hpp"
#include "hipsim/errors.hpp"

namespace hipsim {

MccpParams::MccpParams(BilinearTable M_table, LinearTable hardening_table,
                       double rho0)
    : M_(std::move(M_table)), hardening_(std::move(hardening_table)), rho0_(rho0) {
  for (const auto& row : M_.values()) {
    for (double m : row) {
      if (!(m > 0.0)) throw ConfigError("MccpParams: M values must be > 0");
    }
  }
  const auto& vals = hardening_.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!(vals[i] > 0.0)) {
      throw ConfigError("MccpParams: hardening pressures must be > 0");
    }
    if (i > 0 && vals[i] < vals[i - 1]) {
      throw ConfigError("MccpParams: hardening pressures must be nondecreasing");
    }
  }
  if (!(hardening_.keys().front() >= 0.0)) {
    throw ConfigError("MccpParams: hardening strain keys must be >= 0");
  }
  if (!(rho0_ > 0.0 && rho0_ <= 1.0)) {
    throw ConfigError("MccpParams: rho0 must lie in (0, 1]");
  }
}

double MccpParams::semiaxis(double eps_vol_p) const {
  return hardening_(std::max(-eps_vol_p, 0.0));
}

double MccpParams::invert_hardening(double a) const {
  return hardening_.inverse(a);
}

double yield_value(const StressInvariants& inv, double a, double M) {
  const double pa = inv.p / a;
  const double qa = inv.q / (M * a);
  return pa * pa + qa * qa - 1.0;
}

namespace {

constexpr double kYieldTol = 1e-10;
constexpr int kMaxIter = 50;

struct ReturnTrial {
  double p_end = 0.0;
  double q_end = 0.0;
  double a = 0.0;
  double ev_end = 0.0;
  double dev_scale = 1.0;  // s_end = s_trial * dev_scale
};

// End-of-step state for a candidate plastic multiplier: p and q contract
// radially while the semi-axis hardens with the implied volumetric strain.
// The (p, a, ev) coupling is resolved by fixed-point iteration.
ReturnTrial evaluate_trial(double dlambda, double p_tr, double q_tr, double K,
                           double G, double M, double ev_n,
                           const MccpParams& params) {
  ReturnTrial r;
  r.a = params.semiaxis(ev_n);
  r.ev_end = ev_n;
  for (int i = 0; i < kMaxIter; ++i) {
    const double a2 = r.a * r.a;
    r.p_end = p_tr / (1.0 + 2.0 * K * dlambda / a2);
    r.ev_end = ev_n - dlambda * 2.0 * r.p_end / a2;
    const double a_new = params.semiaxis(r.ev_end);
    if (std::abs(a_new - r.a) < 1e-14 * std::max(1.0, r.a)) {
      r.a = a_new;
      break;
    }
    r.a = a_new;
  }
  const double Ma2 = M * M * r.a * r.a;
  r.dev_scale = 1.0 / (1.0 + 6.0 * G * dlambda / Ma2);
  r.q_end = q_tr * r.dev_scale;
  return r;
}

}  // namespace

MccpStepResult mccp_step(const PointState& state, const SymTensor3& deps_total,
                         double T, const MccpParams& params,
                         const MaterialTables& tables) {
  MccpStepResult out;
  const double E = tables.youngs_modulus(state.rho, T);
  const double nu = tables.poisson_ratio(state.rho, T);
  const auto [lambda, mu] = lame_params(E, nu);
  const double K = lambda + 2.0 * mu / 3.0;
  const double G = mu;
  const double M = params.M(state.rho, T);

  const SymTensor3 eps_e_tr = state.eps_e + deps_total;
  const SymTensor3 sigma_tr =
      SymTensor3::iso(lambda * eps_e_tr.trace()) + eps_e_tr * (2.0 * mu);
  const StressInvariants inv_tr = invariants(sigma_tr);
  const double ev_n = state.eps_vp.trace();
  const double a_n = params.semiaxis(ev_n);

  out.state = state;
  out.state.T = T;
  if (yield_value(inv_tr, a_n, M) <= kYieldTol) {
    out.state.eps_e = eps_e_tr;
    out.state.stress = sigma_tr;
    return out;
  }

  // Bracket the plastic multiplier: F(0) > 0 and F decreases monotonically.
  const double p_tr = inv_tr.p;
  const double q_tr = inv_tr.q;
  auto F_of = [&](double dl) {
    const ReturnTrial r = evaluate_trial(dl, p_tr, q_tr, K, G, M, ev_n, params);
    StressInvariants i2;
    i2.p = r.p_end;
    i2.q = r.q_end;
    return yield_value(i2, r.a, M);
  };

  double lo = 0.0, hi = std::max(a_n / (2.0 * K + 6.0 * G), 1e-12);
  double F_hi = F_of(hi);
  int expand = 0;
  while (F_hi > 0.0 && expand < 200) {
    lo = hi;
    hi *= 2.0;
    F_hi = F_of(hi);
    ++expand;
  }
  if (F_hi > 0.0) {
    out.converged = false;
    return out;
  }

  // Secant/bisection hybrid on F(dlambda) = 0.
  double F_lo = F_of(lo);
  double dl = hi;
  double F_dl = F_hi;
  for (out.iterations = 0; out.iterations < kMaxIter; ++out.iterations) {
    double cand;
    if (F_lo != F_hi) {
      cand = lo - F_lo * (hi - lo) / (F_hi - F_lo);
      if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    } else {
      cand = 0.5 * (lo + hi);
    }
    F_dl = F_of(cand);
    dl = cand;
    if (std::abs(F_dl) < kYieldTol) break;
    if (F_dl > 0.0) {
      lo = cand;
      F_lo = F_dl;
    } else {
      hi = cand;
      F_hi = F_dl;
    }
  }
  if (std::abs(F_dl) >= kYieldTol) {
    out.converged = false;
    return out;
  }

  const ReturnTrial r = evaluate_trial(dl, p_tr, q_tr, K, G, M, ev_n, params);
  const SymTensor3 s_end = sigma_tr.deviator() * r.dev_scale;
  const double Ma2 = M * M * r.a * r.a;
  // dF/dsigma = -(2 p / (3 a^2)) I + (3 / (M^2 a^2)) s at the returned stress
  out.flow_direction = SymTensor3::iso(-2.0 * r.p_end / (3.0 * r.a * r.a)) +
                       s_end * (3.0 / Ma2);
  out.plastic_increment = out.flow_direction * dl;
  out.plastic = true;
  out.dlambda = dl;
  out.yield_residual = std::abs(F_dl);

  out.state.eps_vp = state.eps_vp + out.plastic_increment;
  out.state.eps_e = eps_e_tr - out.plastic_increment;
  out.state.stress = SymTensor3::iso(lambda * out.state.eps_e.trace()) +
                     out.state.eps_e * (2.0 * mu);
  out.state.rho = density_update(params.rho0(), out.state.eps_vp.trace());
  return out;
}

double mccp_hydrostatic_consistency(double P, double eps_vol_p,
                                    const MccpParams& params) {
  const double a = params.semiaxis(eps_vol_p);
  if (P <= a * (1.0 + 1e-15)) return eps_vol_p;
  if (P > params.max_semiaxis() * (1.0 + 1e-12)) {
    throw DataError("mccp: hardening table exhausted (pressure above last knot)");
  }
  const double x = params.invert_hardening(std::min(P, params.max_semiaxis()));
  return -x;
}

}  // namespace hipsim
