#include "hipsim/state.hpp"

#include <algorithm>

#include "hipsim/errors.hpp"

namespace hipsim {

HipSchedule::HipSchedule(LinearTable pressure_profile,
                         LinearTable temperature_profile)
    : pressure_(std::move(pressure_profile)),
      temperature_(std::move(temperature_profile)) {
  for (double p : pressure_.values()) {
    if (!(p >= 0.0)) throw ConfigError("HipSchedule: pressure must be >= 0");
  }
}

double HipSchedule::end_time() const {
  return std::max(pressure_.keys().back(), temperature_.keys().back());
}

}  // namespace hipsim
