#include "hipsim/tables.hpp"

#include <cmath>
#include <stdexcept>

#include "hipsim/errors.hpp"

namespace hipsim {

namespace {

constexpr double kDenseTol = 1e-12;

void check_positive(const LinearTable& t, const char* what) {
  for (double v : t.values()) {
    if (!(v > 0.0)) throw ConfigError(std::string(what) + " values must be > 0");
  }
}

void check_rho_keys(const LinearTable& t, const char* what) {
  if (!(t.keys().front() > 0.0) || !(t.keys().back() <= 1.0 + kDenseTol)) {
    throw ConfigError(std::string(what) + " keys must lie in (0, 1]");
  }
}

// Append or verify the fully dense knot (rho = 1, value = limit).
LinearTable enforce_dense_limit(LinearTable t, double limit, const char* what) {
  auto keys = t.keys();
  auto vals = t.values();
  if (std::abs(keys.back() - 1.0) < kDenseTol) {
    if (std::abs(vals.back() - limit) > kDenseTol) {
      throw ConfigError(std::string(what) + ": value at rho = 1 must equal " +
                        std::to_string(limit));
    }
    keys.back() = 1.0;
    vals.back() = limit;
  } else {
    keys.push_back(1.0);
    vals.push_back(limit);
  }
  return LinearTable(std::move(keys), std::move(vals), what);
}

}  // namespace

MaterialTables::MaterialTables(LinearTable A_table, LinearTable N_table,
                               LinearTable c_table, LinearTable f_table,
                               BilinearTable E_table, BilinearTable nu_table,
                               BilinearTable cte_table)
    : A_(std::move(A_table)),
      N_(std::move(N_table)),
      c_(std::move(c_table)),
      f_(std::move(f_table)),
      E_(std::move(E_table)),
      nu_(std::move(nu_table)),
      cte_(std::move(cte_table)) {
  check_positive(A_, "A(T)");
  for (double n : N_.values()) {
    if (!(n >= 1.0)) throw ConfigError("N(T) values must be >= 1");
  }
  check_positive(c_, "c(rho)");
  for (double v : f_.values()) {
    if (!(v >= 0.0)) throw ConfigError("f(rho) values must be >= 0");
  }
  check_rho_keys(c_, "c(rho)");
  check_rho_keys(f_, "f(rho)");
  c_ = enforce_dense_limit(std::move(c_), 1.0, "c(rho)");
  f_ = enforce_dense_limit(std::move(f_), 0.0, "f(rho)");
  for (const auto& row : E_.values()) {
    for (double v : row) {
      if (!(v > 0.0)) throw ConfigError("E(rho, T) values must be > 0");
    }
  }
  for (const auto& row : nu_.values()) {
    for (double v : row) {
      if (!(v >= 0.0 && v < 0.5)) {
        throw ConfigError("nu(rho, T) values must lie in [0, 0.5)");
      }
    }
  }
}

std::pair<double, double> MaterialTables::lookup_AN(double T) const {
  if (A_.empty() || N_.empty()) throw ConfigError("A/N tables are empty");
  return {A_(T), N_(T)};
}

std::pair<double, double> MaterialTables::lookup_cf(double rho) const {
  if (!(rho > 0.0) || rho > 1.0 + kDenseTol) {
    throw std::domain_error("lookup_cf: rho must lie in (0, 1]");
  }
  if (rho >= 1.0) return {1.0, 0.0};
  return {c_(rho), f_(rho)};
}

std::pair<double, double> MaterialTables::cf_slopes(double rho) const {
  return {c_.slope(rho), f_.slope(rho)};
}

MaterialTables MaterialTables::with_AN(LinearTable A_table,
                                       LinearTable N_table) const {
  return MaterialTables(std::move(A_table), std::move(N_table), c_, f_, E_, nu_,
                        cte_);
}

MaterialTables MaterialTables::with_cf(LinearTable c_table,
                                       LinearTable f_table) const {
  return MaterialTables(A_, N_, std::move(c_table), std::move(f_table), E_, nu_,
                        cte_);
}

}  // namespace hipsim
