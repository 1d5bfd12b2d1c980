#pragma once

// INI-style experiment configuration. Sections mirror the Scenario fields:
//
//   [area]      width_m, height_m
//   [grid]      rows, cols, coverage_radius_m, capacity_mbps
//   [haps]      capacity_mbps, altitude_m
//   [users]     num_users, active_user_count
//   [time]      ts_duration_s, num_ts
//   [traffic]   demand_sigma_mbps | mean_demand_mbps
//   [mobility]  speed_min_mps, speed_max_mps, pause_prob
//   [run]       seed
//   [power]     kw_per_gbps
//   [sweep]     means, variants, threads
//   [calibration] target_utilization, target_rejection, tolerance, slots
//
// Every key is optional; unknown sections or keys are rejected.

#include <iosfwd>
#include <string>
#include <vector>

#include "hapsim/experiment.hpp"
#include "hapsim/scenario.hpp"

namespace hapsim {

struct ExperimentConfig {
  Scenario scenario{};
  /// False when the file left active_user_count unset and the calibrated
  /// default was substituted.
  bool active_user_count_given = false;
  double kw_per_gbps = kDefaultPowerKwPerGbps;
  std::vector<double> sweep_means = default_sweep_means();
  std::vector<VariantSpec> sweep_variants = {
      {VariantKind::baseline, 0.0},      {VariantKind::densified, 0.0},     {VariantKind::haps, 2000.0},
      {VariantKind::haps, 5000.0},       {VariantKind::haps, 10000.0},      {VariantKind::haps, 15000.0},
      {VariantKind::haps, 20000.0}};
  unsigned sweep_threads = 0;
  CalibrationOptions calibration{};
};

/// Throws ConfigError on syntax errors, unknown keys or invalid values.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);

}  // namespace hapsim
