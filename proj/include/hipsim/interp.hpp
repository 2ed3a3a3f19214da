#pragma once

#include <string>
#include <vector>

namespace hipsim {

//! Piecewise-linear table over strictly increasing keys.
//! Evaluation is linear between keys and constant beyond either end.
class LinearTable {
 public:
  LinearTable() = default;
  //! Throws ConfigError if keys are not strictly increasing or sizes mismatch.
  LinearTable(std::vector<double> keys, std::vector<double> values,
              std::string name = "table");

  double operator()(double x) const;
  //! Piecewise-constant derivative; right-hand slope at interior knots,
  //! zero outside the key range (constant extrapolation).
  double slope(double x) const;
  //! Inverse lookup for monotone nondecreasing values. Returns the smallest
  //! key with value(key) == y (linear inverse interpolation between knots).
  //! Throws DataError if y is outside the value range.
  double inverse(double y) const;

  bool empty() const { return keys_.empty(); }
  std::size_t size() const { return keys_.size(); }
  const std::vector<double>& keys() const { return keys_; }
  const std::vector<double>& values() const { return values_; }
  double front_value() const { return values_.front(); }
  double back_value() const { return values_.back(); }
  double back_key() const { return keys_.back(); }

 private:
  std::vector<double> keys_;
  std::vector<double> values_;
  std::string name_;
};

//! Bilinear table on a rectangular (x, y) grid with constant extrapolation
//! outside the grid in either direction.
class BilinearTable {
 public:
  BilinearTable() = default;
  //! values[i][j] corresponds to (x_keys[i], y_keys[j]).
  BilinearTable(std::vector<double> x_keys, std::vector<double> y_keys,
                std::vector<std::vector<double>> values,
                std::string name = "table2d");

  double operator()(double x, double y) const;
  //! Partial derivative in x at fixed y (right-hand slope at knots).
  double slope_x(double x, double y) const;

  bool empty() const { return x_keys_.empty(); }
  const std::vector<double>& x_keys() const { return x_keys_; }
  const std::vector<double>& y_keys() const { return y_keys_; }
  const std::vector<std::vector<double>>& values() const { return values_; }

 private:
  double value_at(std::size_t i, double y) const;

  std::vector<double> x_keys_;
  std::vector<double> y_keys_;
  std::vector<std::vector<double>> values_;
  std::string name_;
};

}  // namespace hipsim
