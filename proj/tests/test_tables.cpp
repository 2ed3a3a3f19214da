#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "hipsim/errors.hpp"
#include "hipsim/tables.hpp"
#include "synthetic.hpp"

using namespace hipsim;

namespace {

MaterialTables tables_with_AN(std::vector<double> T, std::vector<double> A,
                              std::vector<double> N) {
  return MaterialTables(
      LinearTable(T, A, "A"), LinearTable(T, N, "N"),
      LinearTable({1.0}, {1.0}, "c"), LinearTable({1.0}, {0.0}, "f"),
      BilinearTable({1.0}, {20.0}, {{100000.0}}, "E"),
      BilinearTable({1.0}, {20.0}, {{0.3}}, "nu"),
      BilinearTable({1.0}, {20.0}, {{1e-5}}, "cte"));
}

}  // namespace

TEST_CASE("A, N interpolate linearly and extrapolate as constants") {
  const auto t = tables_with_AN({600.0, 800.0}, {2e-16, 4e-14}, {7.0, 6.0});
  const auto [A_mid, N_mid] = t.lookup_AN(700.0);
  CHECK(A_mid == doctest::Approx((2e-16 + 4e-14) / 2.0).epsilon(1e-14));
  CHECK(N_mid == doctest::Approx(6.5).epsilon(1e-14));
  // Below the lowest calibrated temperature the values stay at that key.
  CHECK(t.lookup_AN(300.0).first == doctest::Approx(2e-16).epsilon(1e-14));
  CHECK(t.lookup_AN(300.0).second == doctest::Approx(7.0).epsilon(1e-14));
  const auto single = tables_with_AN({600.0}, {2e-16}, {7.0});
  CHECK(single.lookup_AN(900.0).first == doctest::Approx(2e-16).epsilon(1e-14));
}

TEST_CASE("c, f lookups: dense limit, interpolation, extrapolation, domain") {
  const MaterialTables t = testing::synthetic_tables();
  const auto [c1, f1] = t.lookup_cf(1.0);
  CHECK(c1 == 1.0);
  CHECK(f1 == 0.0);

  // midway between the 0.60 and 0.70 knots of the c table
  CHECK(t.lookup_cf(0.65).first == doctest::Approx((3.0 + 2.2) / 2.0).epsilon(1e-14));
  // below the lowest key: constant
  CHECK(t.lookup_cf(0.40).second == doctest::Approx(0.125).epsilon(1e-14));

  CHECK_THROWS_AS(t.lookup_cf(0.0), std::domain_error);
  CHECK_THROWS_AS(t.lookup_cf(-0.2), std::domain_error);
  CHECK_THROWS_AS(t.lookup_cf(1.5), std::domain_error);
}

TEST_CASE("dense limits are enforced at construction") {
  // Missing (1.0, limit) knots are appended.
  const MaterialTables t(
      LinearTable({20.0}, {1e-12}, "A"), LinearTable({20.0}, {5.0}, "N"),
      LinearTable({0.6, 0.9}, {3.0, 1.4}, "c"),
      LinearTable({0.6, 0.9}, {0.1, 0.03}, "f"),
      BilinearTable({1.0}, {20.0}, {{100000.0}}, "E"),
      BilinearTable({1.0}, {20.0}, {{0.3}}, "nu"),
      BilinearTable({1.0}, {20.0}, {{1e-5}}, "cte"));
  CHECK(t.c_table().back_key() == 1.0);
  CHECK(t.c_table().back_value() == 1.0);
  CHECK(t.f_table().back_value() == 0.0);
  // interpolation now runs from the last user knot to the dense limit
  CHECK(t.lookup_cf(0.95).first == doctest::Approx(1.2).epsilon(1e-12));

  // A contradicting value at rho = 1 is rejected.
  CHECK_THROWS_AS(
      MaterialTables(LinearTable({20.0}, {1e-12}, "A"),
                     LinearTable({20.0}, {5.0}, "N"),
                     LinearTable({0.6, 1.0}, {3.0, 2.0}, "c"),
                     LinearTable({1.0}, {0.0}, "f"),
                     BilinearTable({1.0}, {20.0}, {{100000.0}}, "E"),
                     BilinearTable({1.0}, {20.0}, {{0.3}}, "nu"),
                     BilinearTable({1.0}, {20.0}, {{1e-5}}, "cte")),
      ConfigError);
}

TEST_CASE("construction validates positivity and ranges") {
  CHECK_THROWS_AS(tables_with_AN({600.0}, {-1e-16}, {7.0}), ConfigError);
  CHECK_THROWS_AS(tables_with_AN({600.0}, {1e-16}, {0.5}), ConfigError);
  CHECK_THROWS_AS(
      MaterialTables(LinearTable({20.0}, {1e-12}, "A"),
                     LinearTable({20.0}, {5.0}, "N"),
                     LinearTable({1.0}, {1.0}, "c"), LinearTable({1.0}, {0.0}, "f"),
                     BilinearTable({1.0}, {20.0}, {{100000.0}}, "E"),
                     BilinearTable({1.0}, {20.0}, {{0.55}}, "nu"),
                     BilinearTable({1.0}, {20.0}, {{1e-5}}, "cte")),
      ConfigError);
}

TEST_CASE("interpolants are continuous across every table key") {
  const MaterialTables t = testing::synthetic_tables();
  const double h = 1e-9;
  for (double T : t.A_table().keys()) {
    CHECK(t.lookup_AN(T - h).first ==
          doctest::Approx(t.lookup_AN(T + h).first).epsilon(1e-6));
    CHECK(t.lookup_AN(T - h).second ==
          doctest::Approx(t.lookup_AN(T + h).second).epsilon(1e-6));
  }
  for (double rho : t.f_table().keys()) {
    if (rho <= h || rho >= 1.0) continue;
    CHECK(t.lookup_cf(rho - h).second ==
          doctest::Approx(t.lookup_cf(rho + h).second).epsilon(1e-6));
    CHECK(t.lookup_cf(rho - h).first ==
          doctest::Approx(t.lookup_cf(rho + h).first).epsilon(1e-6));
  }
}

TEST_CASE("table slopes use the right-hand segment at knots") {
  const LinearTable f({0.5, 0.8, 1.0}, {0.2, 0.05, 0.0}, "f");
  CHECK(f.slope(0.6) == doctest::Approx((0.05 - 0.2) / 0.3).epsilon(1e-12));
  CHECK(f.slope(0.8) == doctest::Approx((0.0 - 0.05) / 0.2).epsilon(1e-12));
  CHECK(f.slope(0.4) == 0.0);   // constant extrapolation region
  CHECK(f.slope(1.0) == 0.0);
}

TEST_CASE("bilinear grid interpolates and clamps") {
  const BilinearTable g({0.5, 1.0}, {0.0, 100.0},
                        {{10.0, 20.0}, {30.0, 40.0}}, "g");
  CHECK(g(0.75, 50.0) == doctest::Approx(25.0).epsilon(1e-14));
  CHECK(g(0.25, 50.0) == doctest::Approx(15.0).epsilon(1e-14));   // clamp x
  CHECK(g(1.5, 200.0) == doctest::Approx(40.0).epsilon(1e-14));   // clamp both
  CHECK(g.slope_x(0.75, 0.0) == doctest::Approx(40.0).epsilon(1e-12));
}
