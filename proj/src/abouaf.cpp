#include "hipsim/abouaf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hipsim {

double equivalent_stress(const StressInvariants& inv, double c, double f) {
  const double radicand = 3.0 * c * inv.J2 + f * inv.I1 * inv.I1;
  return std::sqrt(std::max(radicand, 0.0));
}

SymTensor3 vp_strain_rate(const SymTensor3& stress, double T, double rho,
                          const MaterialTables& tables) {
  const auto [A, N] = tables.lookup_AN(T);
  const auto [c, f] = tables.lookup_cf(rho);
  const StressInvariants inv = invariants(stress);
  const double seq = equivalent_stress(inv, c, f);
  if (seq <= 0.0) return SymTensor3::zero();
  const double scale = A * std::pow(seq, N - 1.0);
  const SymTensor3 s = stress.deviator();
  return (s * (1.5 * c) + SymTensor3::iso(f * inv.I1)) * scale;
}

VpIncrement vp_increments(const SymTensor3& stress, double T, double rho,
                          const MaterialTables& tables, double dt) {
  const auto [A, N] = tables.lookup_AN(T);
  const auto [c, f] = tables.lookup_cf(rho);
  const StressInvariants inv = invariants(stress);
  const double seq = equivalent_stress(inv, c, f);
  VpIncrement out;
  if (seq <= 0.0) return out;
  const double scale = A * std::pow(seq, N - 1.0) * dt;
  out.d_sw = 3.0 * f * inv.I1 * scale;
  out.d_cr = c * inv.q * scale;
  if (inv.q > 0.0) out.direction = stress.deviator() * (1.5 / inv.q);
  return out;
}

VpDerivatives vp_derivatives(const SymTensor3& stress, double T, double rho,
                             const MaterialTables& tables, double dt) {
  const auto [A, N] = tables.lookup_AN(T);
  const auto [c, f] = tables.lookup_cf(rho);
  const StressInvariants inv = invariants(stress);
  const double seq = equivalent_stress(inv, c, f);
  if (seq <= 0.0) {
    throw std::domain_error("vp_derivatives: singular at sigma_eqv = 0");
  }
  const auto [dc_drho, df_drho] = tables.cf_slopes(rho);
  // rho = rho0 e^{-esw}  =>  d rho / d esw = -rho at the current state.
  const double dc_desw = -rho * dc_drho;
  const double df_desw = -rho * df_drho;

  const double p = inv.p;
  const double q = inv.q;
  // sigma_eqv^2 = c q^2 + 9 f p^2
  const double dseq_dp = 9.0 * f * p / seq;
  const double dseq_dq = c * q / seq;
  const double dseq_desw = (q * q * dc_desw + 9.0 * p * p * df_desw) / (2.0 * seq);

  const double sN1 = std::pow(seq, N - 1.0);
  const double sN2 = std::pow(seq, N - 2.0);
  const double Adt = A * dt;

  VpDerivatives d;
  d.dcr_desw = Adt * q * (dc_desw * sN1 + c * (N - 1.0) * sN2 * dseq_desw);
  d.dcr_dp = Adt * q * c * (N - 1.0) * sN2 * dseq_dp;
  d.dcr_dq = Adt * (c * sN1 + c * (N - 1.0) * sN2 * dseq_dq * q);
  d.dsw_desw = -9.0 * Adt * p * (df_desw * sN1 + f * (N - 1.0) * sN2 * dseq_desw);
  d.dsw_dp = -9.0 * Adt * (f * (N - 1.0) * sN2 * dseq_dp * p + f * sN1);
  d.dsw_dq = -9.0 * Adt * f * (N - 1.0) * sN2 * dseq_dq * p;
  return d;
}

double density_update(double rho0, double eps_vol_vp) {
  return std::min(1.0, rho0 * std::exp(-eps_vol_vp));
}

LameParams lame_params(double E, double nu) {
  return {E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), E / (2.0 * (1.0 + nu))};
}

SymTensor3 elastic_stress(const SymTensor3& eps_e, double T, double rho,
                          const MaterialTables& tables) {
  const auto [lambda, mu] = lame_params(tables.youngs_modulus(rho, T),
                                        tables.poisson_ratio(rho, T));
  return SymTensor3::iso(lambda * eps_e.trace()) + eps_e * (2.0 * mu);
}

SymTensor3 thermal_strain(double T, double T_ref, double rho,
                          const MaterialTables& tables) {
  return SymTensor3::iso(tables.cte(rho, T) * (T - T_ref));
}

}  // namespace hipsim
