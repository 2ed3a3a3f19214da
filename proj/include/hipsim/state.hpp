#pragma once

#include "hipsim/interp.hpp"
#include "hipsim/tensor.hpp"

namespace hipsim {

//! State of one material point.
struct PointState {
  SymTensor3 stress;   //!< Cauchy stress, MPa
  double T = 20.0;     //!< temperature, degC
  double rho = 1.0;    //!< relative density, (0, 1]
  SymTensor3 eps_vp;   //!< accumulated inelastic (visco-plastic or plastic) strain
  SymTensor3 eps_e;    //!< elastic strain
  double t = 0.0;      //!< simulation clock, s
};

//! Piecewise-linear HIP cycle: gas pressure P(t) [MPa] and furnace
//! temperature T(t) [degC]. Constant extrapolation beyond the last key.
class HipSchedule {
 public:
  HipSchedule() = default;
  HipSchedule(LinearTable pressure_profile, LinearTable temperature_profile);

  double pressure(double t) const { return pressure_(t); }
  double temperature(double t) const { return temperature_(t); }
  //! Last key of either profile; integration normally ends here.
  double end_time() const;

  const LinearTable& pressure_profile() const { return pressure_; }
  const LinearTable& temperature_profile() const { return temperature_; }

  bool operator==(const HipSchedule& o) const {
    return pressure_.keys() == o.pressure_.keys() &&
           pressure_.values() == o.pressure_.values() &&
           temperature_.keys() == o.temperature_.keys() &&
           temperature_.values() == o.temperature_.values();
  }

 private:
  LinearTable pressure_;
  LinearTable temperature_;
};

}  // namespace hipsim
