#pragma once

#include <stdexcept>
#include <string>

namespace hipsim {

//! Invalid or inconsistent configuration / input files.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

//! Dataset content violates a documented requirement.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hipsim
