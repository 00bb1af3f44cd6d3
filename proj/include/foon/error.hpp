#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace foon {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// build_graph was handed no functional units.
class EmptyUniverseError : public Error {
 public:
  EmptyUniverseError() : Error("empty universe") {}
};

/// The goal is neither kitchen-satisfied nor produced by any unit.
class UnknownGoalError : public Error {
 public:
  explicit UnknownGoalError(const std::string& key)
      : Error("unknown goal: " + key), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A motion label has no rate and no usable default.
class MissingMotionRateError : public Error {
 public:
  explicit MissingMotionRateError(const std::string& label)
      : Error("missing success rate for motion '" + label + "'"), label_(label) {}
  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

/// Retrieval configuration is unusable (e.g. gbfs-success without a profile).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The exhaustive oracle refuses universes above its unit cap.
class OracleCapExceededError : public Error {
 public:
  OracleCapExceededError(std::size_t units, std::size_t cap)
      : Error("oracle refuses universe of " + std::to_string(units) +
              " units (cap " + std::to_string(cap) + ")") {}
};

}  // namespace foon
