#include "hapsim/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include "hapsim/csv.hpp"
#include "hapsim/errors.hpp"

namespace hapsim {

namespace {

double slot_active_capacity(const TimeSlotResult& r) {
  double cap = 0.0;
  for (const auto& s : r.sites) {
    if (s.served_user_count > 0) cap += s.capacity_mbps;
  }
  if (r.haps_served_user_count > 0) cap += r.haps_capacity_mbps;
  return cap;
}

double slot_served_demand(const TimeSlotResult& r) { return r.served_demand_mbps() + r.haps_served_demand_mbps; }

}  // namespace

double proportion_served(std::span<const TimeSlotResult> results) {
  if (results.empty()) throw UndefinedMetricError("proportion_served: no slots");
  double sum = 0.0;
  for (const auto& r : results) {
    if (r.active_user_count == 0) {
      sum += 1.0;
      continue;
    }
    sum += static_cast<double>(r.served_user_count() + r.haps_served_user_count) / r.active_user_count;
  }
  return sum / static_cast<double>(results.size());
}

double capacity_utilization(std::span<const TimeSlotResult> results, double deployed_capacity_mbps) {
  if (!(deployed_capacity_mbps > 0.0)) throw UndefinedMetricError("capacity_utilization: zero deployed capacity");
  if (results.empty()) throw UndefinedMetricError("capacity_utilization: no slots");
  double sum = 0.0;
  for (const auto& r : results) sum += slot_served_demand(r) / deployed_capacity_mbps;
  return sum / static_cast<double>(results.size());
}

double capacity_utilization_switchoff(std::span<const TimeSlotResult> results) {
  if (results.empty()) throw UndefinedMetricError("capacity_utilization_switchoff: no slots");
  double sum = 0.0;
  for (const auto& r : results) {
    const double cap = slot_active_capacity(r);
    if (cap > 0.0) sum += slot_served_demand(r) / cap;
  }
  return sum / static_cast<double>(results.size());
}

double mean_active_capacity_mbps(std::span<const TimeSlotResult> results) {
  if (results.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : results) sum += slot_active_capacity(r);
  return sum / static_cast<double>(results.size());
}

double network_power_kw(double deployed_capacity_mbps, double kw_per_gbps) {
  if (!(deployed_capacity_mbps >= 0.0)) throw ConfigError("network_power_kw: capacity must be >= 0");
  return kw_per_gbps * deployed_capacity_mbps / 1000.0;
}

MetricsSummary summarize(std::span<const TimeSlotResult> results, double deployed_capacity_mbps,
                         double kw_per_gbps) {
  MetricsSummary m;
  m.proportion_served = proportion_served(results);
  m.utilization = capacity_utilization(results, deployed_capacity_mbps);
  m.utilization_switchoff = capacity_utilization_switchoff(results);
  m.power_kw = network_power_kw(deployed_capacity_mbps, kw_per_gbps);
  m.power_switchoff_kw = network_power_kw(mean_active_capacity_mbps(results), kw_per_gbps);
  m.total_capacity_mbps = deployed_capacity_mbps;
  double rejected = 0.0;
  for (const auto& r : results) {
    if (r.active_user_count > 0) {
      rejected += static_cast<double>(r.active_user_count - r.served_user_count()) / r.active_user_count;
    }
    m.max_dropped_users = std::max(m.max_dropped_users, r.dropped_user_count);
  }
  m.terrestrial_rejection = rejected / static_cast<double>(results.size());
  return m;
}

void write_summary_csv(std::ostream& os, const MetricsSummary& s) {
  CsvWriter csv(os);
  csv.row("proportion_served", "utilization", "utilization_switchoff", "power_kw", "power_switchoff_kw",
          "total_capacity_mbps", "terrestrial_rejection", "max_dropped_users");
  csv.row(s.proportion_served, s.utilization, s.utilization_switchoff, s.power_kw, s.power_switchoff_kw,
          s.total_capacity_mbps, s.terrestrial_rejection, s.max_dropped_users);
}

void write_summary_text(std::ostream& os, const std::string& title, const MetricsSummary& s) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << title << '\n' << std::fixed;
  os << "  " << std::left << std::setw(30) << "Available Capacity" << std::setprecision(1)
     << s.total_capacity_mbps / 1000.0 << " Gbps\n";
  os << "  " << std::setw(30) << "Proportion of Users Served" << std::setprecision(2)
     << 100.0 * s.proportion_served << " %\n";
  os << "  " << std::setw(30) << "Capacity Utilization" << 100.0 * s.utilization << " %\n";
  os << "  " << std::setw(30) << "Utilization (switch-off)" << 100.0 * s.utilization_switchoff << " %\n";
  os << "  " << std::setw(30) << "Network Power Consumption" << std::setprecision(1) << s.power_kw << " kW\n";
  os << "  " << std::setw(30) << "Power (switch-off)" << s.power_switchoff_kw << " kW\n";
  os.flags(flags);
  os.precision(prec);
}

void write_slot_csv(std::ostream& os, std::span<const TimeSlotResult> results) {
  CsvWriter csv(os);
  csv.row("ts", "site_id", "served_demand", "served_users", "rejected_coverage_count", "rejected_capacity_count",
          "haps_served_demand");
  for (const auto& r : results) {
    for (const auto& s : r.sites) {
      csv.row(r.ts_index, s.site_id, s.served_demand_mbps, s.served_user_count, s.rejected_coverage_count,
              s.rejected_capacity_count, r.haps_served_demand_mbps);
    }
  }
}

void write_rejected_csv(std::ostream& os, std::span<const TimeSlotResult> results) {
  CsvWriter csv(os);
  csv.row("ts", "x", "y", "demand", "reason", "user_id");
  for (const auto& r : results) {
    for (const auto& p : r.rejected_points) {
      csv.row(p.ts_index, p.position.x_m, p.position.y_m, p.demand_mbps,
              p.reason == RejectReason::coverage ? "coverage" : "capacity", p.user_id);
    }
  }
}

}  // namespace hapsim
