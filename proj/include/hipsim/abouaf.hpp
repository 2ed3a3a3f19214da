#pragma once

#include "hipsim/tables.hpp"
#include "hipsim/tensor.hpp"

namespace hipsim {

//! Density-weighted equivalent stress sqrt(3 c J2 + f I1^2) [MPa].
//! Reduces to the von Mises stress q for the fully dense limit (c=1, f=0)
//! and to |I1| sqrt(f) under pure hydrostatic stress.
double equivalent_stress(const StressInvariants& inv, double c, double f);

//! Visco-plastic strain rate A sigma_eqv^(N-1) (3/2 c s + f I1 I) [1/s].
//! Exact zero tensor when sigma_eqv = 0 (power-law guard).
SymTensor3 vp_strain_rate(const SymTensor3& stress, double T, double rho,
                          const MaterialTables& tables);

//! Equivalent swelling/creep increments over one time step.
//! d_sw = 3 f I1 A sigma_eqv^(N-1) dt (volumetric; negative in compaction),
//! d_cr = c q A sigma_eqv^(N-1) dt along the deviatoric direction
//! n = (3/2) s / q. The tensor increment (d_sw/3) I + d_cr n equals
//! dt * vp_strain_rate identically.
struct VpIncrement {
  double d_sw = 0.0;
  double d_cr = 0.0;
  SymTensor3 direction;

  SymTensor3 tensor() const {
    return SymTensor3::iso(d_sw / 3.0) + direction * d_cr;
  }
};

VpIncrement vp_increments(const SymTensor3& stress, double T, double rho,
                          const MaterialTables& tables, double dt);

//! Analytic derivatives of the swelling/creep increments with respect to the
//! accumulated swelling strain (through rho = rho * e^{-d esw}), the
//! hydrostatic pressure p and the von Mises stress q. These feed the Newton
//! iterations of the implicit integrator.
struct VpDerivatives {
  double dcr_desw = 0.0;
  double dcr_dp = 0.0;
  double dcr_dq = 0.0;
  double dsw_desw = 0.0;
  double dsw_dp = 0.0;
  double dsw_dq = 0.0;
};

//! Throws std::domain_error when sigma_eqv = 0 (derivatives singular; the
//! integrator falls back to an elastic trial step).
VpDerivatives vp_derivatives(const SymTensor3& stress, double T, double rho,
                             const MaterialTables& tables, double dt);

//! Relative density update rho0 * exp(-eps_vol_vp), clamped at full density.
double density_update(double rho0, double eps_vol_vp);

//! Isotropic linear elasticity sigma = lambda tr(eps_e) I + 2 mu eps_e with
//! lambda, mu from E(rho, T) and nu(rho, T).
SymTensor3 elastic_stress(const SymTensor3& eps_e, double T, double rho,
                          const MaterialTables& tables);

//! Thermal strain alpha(rho, T) (T - T_ref) I.
SymTensor3 thermal_strain(double T, double T_ref, double rho,
                          const MaterialTables& tables);

//! Lame parameters (lambda, mu) from E, nu.
struct LameParams {
  double lambda = 0.0;
  double mu = 0.0;
};
LameParams lame_params(double E, double nu);

}  // namespace hipsim
