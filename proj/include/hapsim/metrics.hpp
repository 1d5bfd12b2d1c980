#pragma once

// Headline network metrics, averaged arithmetically over slots.

#include <iosfwd>
#include <span>
#include <string>

#include "hapsim/association.hpp"

namespace hapsim {

inline constexpr double kDefaultPowerKwPerGbps = 3.7;

struct MetricsSummary {
  double proportion_served = 0.0;
  double utilization = 0.0;
  double utilization_switchoff = 0.0;
  double power_kw = 0.0;
  /// Mean over slots of the power of the capacity that was switched on.
  double power_switchoff_kw = 0.0;
  double total_capacity_mbps = 0.0;
  /// Mean fraction of active users rejected by the terrestrial tier alone
  /// (before any HAPS overlay picks them up).
  double terrestrial_rejection = 0.0;
  int max_dropped_users = 0;
};

/// Mean over slots of (site-served + HAPS-served users) / active users.
/// A slot with no active users counts as fully served.
double proportion_served(std::span<const TimeSlotResult> results);

/// Mean over slots of served demand / deployed capacity.
/// Throws UndefinedMetricError when deployed capacity is not positive.
double capacity_utilization(std::span<const TimeSlotResult> results, double deployed_capacity_mbps);

/// As capacity_utilization, but each slot's denominator only counts sites
/// (and the HAPS) that served at least one user in that slot. Slots with
/// nothing switched on contribute 0.
double capacity_utilization_switchoff(std::span<const TimeSlotResult> results);

/// Mean over slots of the capacity switched on (serving >= 1 user).
double mean_active_capacity_mbps(std::span<const TimeSlotResult> results);

/// Linear power model: coefficient [kW/Gbps] x deployed capacity.
double network_power_kw(double deployed_capacity_mbps, double kw_per_gbps = kDefaultPowerKwPerGbps);

MetricsSummary summarize(std::span<const TimeSlotResult> results, double deployed_capacity_mbps,
                         double kw_per_gbps = kDefaultPowerKwPerGbps);

/// One header line plus one data row.
void write_summary_csv(std::ostream& os, const MetricsSummary& summary);

/// Aligned text block using the comparison-table row labels.
void write_summary_text(std::ostream& os, const std::string& title, const MetricsSummary& summary);

/// Per-slot, per-site rows: ts, site id, served_demand, served_users,
/// rejected_coverage_count, rejected_capacity_count, haps_served_demand.
void write_slot_csv(std::ostream& os, std::span<const TimeSlotResult> results);

/// Rejected demand log: ts, x, y, demand, reason, user id.
void write_rejected_csv(std::ostream& os, std::span<const TimeSlotResult> results);

}  // namespace hapsim
