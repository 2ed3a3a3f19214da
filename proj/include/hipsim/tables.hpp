#pragma once

#include <utility>

#include "hipsim/interp.hpp"

namespace hipsim {

//! Temperature- and density-dependent material property set.
//!
//! A(T) [MPa^-N s^-1] and N(T) [-] drive the power-law strain rate; c(rho)
//! and f(rho) weigh the deviatoric and hydrostatic stress contributions of a
//! porous compact. E(rho, T) [MPa], nu(rho, T) [-] and alpha(rho, T) [1/degC]
//! define the thermo-elastic response. All density/temperature dependence is
//! piecewise linear between table keys, constant beyond them; no smooth curve
//! fit is ever applied.
class MaterialTables {
 public:
  MaterialTables() = default;
  //! Validates on construction: A > 0, N >= 1, c > 0, f >= 0, rho keys in
  //! (0, 1], E > 0, 0 <= nu < 0.5. The fully dense limits c(1) = 1 and
  //! f(1) = 0 are enforced: a (1.0, limit) knot is appended when missing and
  //! checked for consistency when present.
  MaterialTables(LinearTable A_table, LinearTable N_table, LinearTable c_table,
                 LinearTable f_table, BilinearTable E_table,
                 BilinearTable nu_table, BilinearTable cte_table);

  //! Linear interpolation of (A, N) at temperature T [degC]; constant beyond
  //! the first/last calibrated temperature.
  std::pair<double, double> lookup_AN(double T) const;

  //! Linear interpolation of (c, f) at relative density rho; constant below
  //! the lowest key; exactly (1, 0) at rho = 1. Throws std::domain_error for
  //! rho outside (0, 1].
  std::pair<double, double> lookup_cf(double rho) const;

  //! Right-hand table slopes dc/drho, df/drho at rho.
  std::pair<double, double> cf_slopes(double rho) const;

  double youngs_modulus(double rho, double T) const { return E_(rho, T); }
  double poisson_ratio(double rho, double T) const { return nu_(rho, T); }
  double cte(double rho, double T) const { return cte_(rho, T); }
  //! d/drho of the elastic constants at fixed T.
  double youngs_modulus_slope_rho(double rho, double T) const {
    return E_.slope_x(rho, T);
  }
  double poisson_ratio_slope_rho(double rho, double T) const {
    return nu_.slope_x(rho, T);
  }

  const LinearTable& A_table() const { return A_; }
  const LinearTable& N_table() const { return N_; }
  const LinearTable& c_table() const { return c_; }
  const LinearTable& f_table() const { return f_; }
  const BilinearTable& E_table() const { return E_; }
  const BilinearTable& nu_table() const { return nu_; }
  const BilinearTable& cte_table() const { return cte_; }

  //! Replace the creep/density tables (used when assembling calibration
  //! output around an existing thermo-elastic property set).
  MaterialTables with_AN(LinearTable A_table, LinearTable N_table) const;
  MaterialTables with_cf(LinearTable c_table, LinearTable f_table) const;

 private:
  LinearTable A_, N_, c_, f_;
  BilinearTable E_, nu_, cte_;
};

}  // namespace hipsim
