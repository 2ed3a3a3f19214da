#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hipsim/errors.hpp"
#include "hipsim/state.hpp"
#include "hipsim/tensor.hpp"

using namespace hipsim;

namespace {

std::mt19937_64 rng(12345);

SymTensor3 random_tensor(double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("invariants of the zero tensor") {
  const StressInvariants inv = invariants(SymTensor3::zero());
  CHECK(inv.I1 == 0.0);
  CHECK(inv.J2 == 0.0);
  CHECK(inv.p == 0.0);
  CHECK(inv.q == 0.0);
}

TEST_CASE("invariants of pure hydrostatic stress") {
  const StressInvariants inv = invariants(SymTensor3::iso(-100.0));
  CHECK(inv.I1 == doctest::Approx(-300.0).epsilon(1e-14));
  CHECK(inv.J2 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(inv.p == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(inv.q == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("invariants of uniaxial compression") {
  // Hand evaluation: s = diag(-200/3, 100/3, 100/3), J2 = 10000/3.
  const StressInvariants inv = invariants(SymTensor3::diag(-100.0, 0.0, 0.0));
  CHECK(inv.I1 == doctest::Approx(-100.0).epsilon(1e-14));
  CHECK(inv.J2 == doctest::Approx(10000.0 / 3.0).epsilon(1e-14));
  CHECK(inv.p == doctest::Approx(100.0 / 3.0).epsilon(1e-14));
  CHECK(inv.q == doctest::Approx(100.0).epsilon(1e-14));
}

TEST_CASE("deviator + volumetric part reconstructs the tensor") {
  for (int i = 0; i < 1000; ++i) {
    const SymTensor3 s = random_tensor(250.0);
    const SymTensor3 rebuilt = s.deviator() + SymTensor3::iso(s.trace() / 3.0);
    const SymTensor3 diff = rebuilt - s;
    CHECK(diff.norm() <= 1e-12 * (1.0 + s.norm()));
    CHECK(std::abs(s.deviator().trace()) <= 1e-12 * (1.0 + s.norm()));
  }
}

TEST_CASE("q is invariant under hydrostatic shifts") {
  std::uniform_real_distribution<double> u(-500.0, 500.0);
  for (int i = 0; i < 1000; ++i) {
    const SymTensor3 s = random_tensor(250.0);
    const double h = u(rng);
    const double q0 = invariants(s).q;
    const double q1 = invariants(s + SymTensor3::iso(h)).q;
    CHECK(q1 == doctest::Approx(q0).epsilon(1e-12));
  }
}

TEST_CASE("schedule evaluates piecewise linearly with constant extrapolation") {
  const HipSchedule sched(
      LinearTable({0.0, 100.0, 200.0}, {0.0, 50.0, 50.0}, "P"),
      LinearTable({0.0, 200.0}, {20.0, 1000.0}, "T"));
  CHECK(sched.pressure(50.0) == doctest::Approx(25.0));
  CHECK(sched.pressure(150.0) == doctest::Approx(50.0));
  CHECK(sched.pressure(1000.0) == doctest::Approx(50.0));  // beyond last key
  CHECK(sched.temperature(-5.0) == doctest::Approx(20.0));
  CHECK(sched.end_time() == doctest::Approx(200.0));
}

TEST_CASE("schedule rejects negative pressures and unsorted keys") {
  CHECK_THROWS_AS(HipSchedule(LinearTable({0.0, 10.0}, {-1.0, 5.0}, "P"),
                              LinearTable({0.0}, {20.0}, "T")),
                  ConfigError);
  CHECK_THROWS_AS(LinearTable({10.0, 0.0}, {1.0, 2.0}, "bad"), ConfigError);
  CHECK_THROWS_AS(LinearTable({}, {}, "empty"), ConfigError);
}
