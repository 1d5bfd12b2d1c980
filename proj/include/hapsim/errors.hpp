#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hapsim {

/// Invalid scenario, site list or parameter set.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A metric whose denominator is zero (e.g. utilization of a network with no capacity).
class UndefinedMetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Demand points that no single added site could ever carry.
class InfeasiblePointError : public std::runtime_error {
 public:
  InfeasiblePointError(const std::string& what, std::vector<std::size_t> offenders)
      : std::runtime_error(what), offenders_(std::move(offenders)) {}

  /// Indices into the input point list.
  const std::vector<std::size_t>& offenders() const noexcept { return offenders_; }

 private:
  std::vector<std::size_t> offenders_;
};

/// Load calibration could not bracket the requested utilization.
class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(const std::string& what, int lo, int hi)
      : std::runtime_error(what), lo_(lo), hi_(hi) {}

  int lower_bracket() const noexcept { return lo_; }
  int upper_bracket() const noexcept { return hi_; }

 private:
  int lo_;
  int hi_;
};

}  // namespace hapsim
