#include "hipsim/interp.hpp"

#include <algorithm>
#include <cstddef>

#include "hipsim/errors.hpp"

namespace hipsim {

namespace {

void check_strictly_increasing(const std::vector<double>& keys,
                               const std::string& name) {
  for (std::size_t i = 1; i < keys.size(); ++i) {
    if (!(keys[i] > keys[i - 1])) {
      throw ConfigError(name + ": keys must be strictly increasing");
    }
  }
}

// Index of the segment [keys[i], keys[i+1]) containing x, clamped to the
// first/last segment for out-of-range x.
std::size_t segment(const std::vector<double>& keys, double x) {
  const auto it = std::upper_bound(keys.begin(), keys.end(), x);
  std::size_t i = static_cast<std::size_t>(it - keys.begin());
  if (i == 0) return 0;
  if (i >= keys.size()) return keys.size() - 2;
  return i - 1;
}

}  // namespace

LinearTable::LinearTable(std::vector<double> keys, std::vector<double> values,
                         std::string name)
    : keys_(std::move(keys)), values_(std::move(values)), name_(std::move(name)) {
  if (keys_.empty()) throw ConfigError(name_ + ": empty table");
  if (keys_.size() != values_.size()) {
    throw ConfigError(name_ + ": keys/values size mismatch");
  }
  check_strictly_increasing(keys_, name_);
}

double LinearTable::operator()(double x) const {
  if (keys_.size() == 1) return values_.front();
  if (x <= keys_.front()) return values_.front();
  if (x >= keys_.back()) return values_.back();
  const std::size_t i = segment(keys_, x);
  const double w = (x - keys_[i]) / (keys_[i + 1] - keys_[i]);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

double LinearTable::slope(double x) const {
  if (keys_.size() == 1) return 0.0;
  if (x < keys_.front() || x >= keys_.back()) return 0.0;
  const std::size_t i = segment(keys_, x);
  return (values_[i + 1] - values_[i]) / (keys_[i + 1] - keys_[i]);
}

double LinearTable::inverse(double y) const {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] < values_[i - 1]) {
      throw DataError(name_ + ": inverse lookup needs nondecreasing values");
    }
  }
  if (y < values_.front() || y > values_.back()) {
    throw DataError(name_ + ": inverse lookup out of range");
  }
  for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
    if (y <= values_[i + 1]) {
      const double dv = values_[i + 1] - values_[i];
      if (dv <= 0.0) return keys_[i + 1];
      const double w = (y - values_[i]) / dv;
      return keys_[i] + w * (keys_[i + 1] - keys_[i]);
    }
  }
  return keys_.back();
}

BilinearTable::BilinearTable(std::vector<double> x_keys,
                             std::vector<double> y_keys,
                             std::vector<std::vector<double>> values,
                             std::string name)
    : x_keys_(std::move(x_keys)),
      y_keys_(std::move(y_keys)),
      values_(std::move(values)),
      name_(std::move(name)) {
  if (x_keys_.empty() || y_keys_.empty()) throw ConfigError(name_ + ": empty grid");
  check_strictly_increasing(x_keys_, name_);
  check_strictly_increasing(y_keys_, name_);
  if (values_.size() != x_keys_.size()) {
    throw ConfigError(name_ + ": row count must match x keys");
  }
  for (const auto& row : values_) {
    if (row.size() != y_keys_.size()) {
      throw ConfigError(name_ + ": column count must match y keys");
    }
  }
}

double BilinearTable::value_at(std::size_t i, double y) const {
  const auto& row = values_[i];
  if (y_keys_.size() == 1) return row.front();
  if (y <= y_keys_.front()) return row.front();
  if (y >= y_keys_.back()) return row.back();
  const std::size_t j = segment(y_keys_, y);
  const double w = (y - y_keys_[j]) / (y_keys_[j + 1] - y_keys_[j]);
  return row[j] + w * (row[j + 1] - row[j]);
}

double BilinearTable::operator()(double x, double y) const {
  if (x_keys_.size() == 1) return value_at(0, y);
  if (x <= x_keys_.front()) return value_at(0, y);
  if (x >= x_keys_.back()) return value_at(x_keys_.size() - 1, y);
  const std::size_t i = segment(x_keys_, x);
  const double w = (x - x_keys_[i]) / (x_keys_[i + 1] - x_keys_[i]);
  return value_at(i, y) + w * (value_at(i + 1, y) - value_at(i, y));
}

double BilinearTable::slope_x(double x, double y) const {
  if (x_keys_.size() == 1) return 0.0;
  if (x < x_keys_.front() || x >= x_keys_.back()) return 0.0;
  const std::size_t i = segment(x_keys_, x);
  return (value_at(i + 1, y) - value_at(i, y)) / (x_keys_[i + 1] - x_keys_[i]);
}

}  // namespace hipsim
