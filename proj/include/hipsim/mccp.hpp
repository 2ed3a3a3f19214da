#pragma once

#include "hipsim/interp.hpp"
#include "hipsim/state.hpp"
#include "hipsim/tables.hpp"
#include "hipsim/tensor.hpp"

namespace hipsim {

//! Parameters of the rate-independent modified Cam-Clay comparison model:
//! elliptical yield surface p^2/a^2 + q^2/(M a)^2 = 1 with a tabulated
//! compaction hardening a(|eps_vol_p|) and a bilinear M(rho, T) surface
//! shape factor.
class MccpParams {
 public:
  MccpParams() = default;
  //! hardening: pairs (|eps_vol_p| -> p [MPa]) with p > 0 nondecreasing.
  MccpParams(BilinearTable M_table, LinearTable hardening_table, double rho0);

  double M(double rho, double T) const { return M_(rho, T); }
  //! Yield-ellipse p semi-axis at accumulated plastic volumetric strain
  //! eps_vol_p (negative in compaction; hardening keyed on the compactive
  //! magnitude max(-eps_vol_p, 0)).
  double semiaxis(double eps_vol_p) const;
  //! Compactive volumetric strain magnitude required for the surface to
  //! reach semi-axis a. Throws DataError beyond the table range.
  double invert_hardening(double a) const;
  double max_semiaxis() const { return hardening_.back_value(); }
  double rho0() const { return rho0_; }

  const BilinearTable& M_table() const { return M_; }
  const LinearTable& hardening_table() const { return hardening_; }

 private:
  BilinearTable M_;
  LinearTable hardening_;
  double rho0_ = 1.0;
};

//! Yield function value p^2/a^2 + q^2/(M a)^2 - 1.
//! Negative inside the ellipse, zero on it, positive outside.
double yield_value(const StressInvariants& inv, double a, double M);

//! Outcome of one strain-driven MCCP step.
struct MccpStepResult {
  PointState state;
  bool converged = true;
  bool plastic = false;
  int iterations = 0;
  double yield_residual = 0.0;   //!< |F| at the returned stress
  double dlambda = 0.0;
  SymTensor3 plastic_increment;
  SymTensor3 flow_direction;     //!< dF/dsigma at the returned stress
};

//! Elastic trial followed (if needed) by a radial return onto the hardened
//! ellipse, Newton-bracketed on the scalar plastic multiplier. Associative
//! flow; relative density updated as rho0 * e^{-eps_vol_p}. Rate independent:
//! the result depends only on the accumulated strain, not on step count, for
//! proportional loading.
MccpStepResult mccp_step(const PointState& state, const SymTensor3& deps_total,
                         double T, const MccpParams& params,
                         const MaterialTables& tables);

//! Stress-driven hydrostatic consistency update: under prescribed pressure P
//! the surface hardens until a(eps_vol_p) = P (purely volumetric associative
//! flow at the p-axis vertex); elastic when P is inside the current surface.
//! Returns the updated eps_vol_p. Throws DataError when P exceeds the
//! hardening table range.
double mccp_hydrostatic_consistency(double P, double eps_vol_p,
                                    const MccpParams& params);

}  // namespace hipsim
