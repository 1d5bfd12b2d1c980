#include "hapsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <mutex>
#include <thread>

#include "hapsim/csv.hpp"
#include "hapsim/errors.hpp"
#include "hapsim/mobility.hpp"

namespace hapsim {

namespace {

constexpr double kDefaultHapsMbps = 2000.0;

struct LoadPoint {
  double utilization;
  double rejection;
};

LoadPoint baseline_load(const Scenario& scenario, std::span<const CellSite> sites, int active_users) {
  Scenario s = scenario;
  s.active_user_count = active_users;
  s.haps_capacity_mbps = 0.0;
  const auto results = run_simulation(s, sites);
  const auto m = summarize(results, total_capacity_mbps(sites));
  return {m.utilization, m.terrestrial_rejection};
}

std::vector<CellSite> concat(std::span<const CellSite> a, std::span<const CellSite> b) {
  std::vector<CellSite> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

int next_site_id(std::span<const CellSite> sites) {
  int id = 0;
  for (const auto& s : sites) id = std::max(id, s.id + 1);
  return id;
}

std::string format_mbps(double mbps) {
  std::ostringstream os;
  os << mbps;
  return os.str();
}

}  // namespace

CalibrationResult calibrate_load(const Scenario& scenario, const CalibrationOptions& options) {
  if (!(options.target_utilization >= 0.0 && options.target_utilization < 1.0)) {
    throw ConfigError("calibrate_load: target utilization must lie in [0, 1)");
  }
  if (options.slots < 1) throw ConfigError("calibrate_load: need at least one slot");
  Scenario s = scenario;
  s.num_ts = options.slots;
  s.haps_capacity_mbps = 0.0;
  s.active_user_count = std::min(s.active_user_count, s.num_users);
  validate(s);
  if (s.num_users < 1) throw CalibrationError("calibrate_load: population is empty", 0, 0);
  const auto sites = place_initial_grid(s);

  CalibrationResult out;
  out.target_utilization = options.target_utilization;
  out.target_rejection = options.target_rejection;

  int lo = 1;
  int hi = s.num_users;
  LoadPoint at_lo = baseline_load(s, sites, lo);
  if (at_lo.utilization >= options.target_utilization) {
    out.active_user_count = 1;
    out.achieved_utilization = at_lo.utilization;
    out.achieved_rejection = at_lo.rejection;
    out.within_tolerance = std::abs(at_lo.utilization - options.target_utilization) <= options.tolerance;
    out.below_minimum = true;
    out.lo = out.hi = 1;
    return out;
  }
  LoadPoint at_hi = baseline_load(s, sites, hi);
  if (at_hi.utilization < options.target_utilization - options.tolerance) {
    throw CalibrationError("calibrate_load: target utilization " + std::to_string(options.target_utilization) +
                               " unreachable; full population gives " + std::to_string(at_hi.utilization),
                           lo, hi);
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    const LoadPoint at_mid = baseline_load(s, sites, mid);
    if (at_mid.utilization < options.target_utilization) {
      lo = mid;
      at_lo = at_mid;
    } else {
      hi = mid;
      at_hi = at_mid;
    }
  }
  const bool pick_lo = options.target_utilization - at_lo.utilization < at_hi.utilization - options.target_utilization;
  const LoadPoint& best = pick_lo ? at_lo : at_hi;
  out.active_user_count = pick_lo ? lo : hi;
  out.achieved_utilization = best.utilization;
  out.achieved_rejection = best.rejection;
  out.within_tolerance = std::abs(best.utilization - options.target_utilization) <= options.tolerance;
  out.lo = lo;
  out.hi = hi;
  return out;
}

MetricsSummary evaluate_sites(const Scenario& scenario, std::span<const CellSite> sites, double kw_per_gbps) {
  Scenario s = scenario;
  s.haps_capacity_mbps = 0.0;
  const auto results = run_simulation(s, sites);
  return summarize(results, total_capacity_mbps(sites), kw_per_gbps);
}

MetricsSummary evaluate_plan(const Scenario& scenario, std::span<const CellSite> initial_sites,
                             std::span<const CellSite> added_sites, double kw_per_gbps) {
  return evaluate_sites(scenario, concat(initial_sites, added_sites), kw_per_gbps);
}

DensificationOutcome densify(const Scenario& scenario, std::span<const CellSite> initial_sites, int max_rounds) {
  Scenario s = scenario;
  s.haps_capacity_mbps = 0.0;
  DensificationOutcome out;
  std::vector<CellSite> sites(initial_sites.begin(), initial_sites.end());
  for (int round = 0; round <= max_rounds; ++round) {
    std::vector<DemandPoint> points;
    for (auto& r : run_simulation(s, sites)) {
      points.insert(points.end(), r.rejected_points.begin(), r.rejected_points.end());
    }
    if (round == 0) out.baseline_rejected_points = points.size();
    if (points.empty()) {
      out.fully_served = true;
      break;
    }
    if (round == max_rounds) break;
    PlannerOptions opts;
    opts.first_site_id = next_site_id(sites);
    auto plan = plan_sites(points, s.bs_coverage_radius_m, s.bs_capacity_mbps, opts);
    sites.insert(sites.end(), plan.new_sites.begin(), plan.new_sites.end());
    out.added_sites.insert(out.added_sites.end(), plan.new_sites.begin(), plan.new_sites.end());
    out.rounds = round + 1;
  }
  return out;
}

ComparisonResult run_table1(const Scenario& scenario, double kw_per_gbps) {
  validate(scenario);
  const auto initial = place_initial_grid(scenario);
  ComparisonResult out;
  out.baseline = evaluate_sites(scenario, initial, kw_per_gbps);
  out.densification = densify(scenario, initial);
  out.densified = evaluate_plan(scenario, initial, out.densification.added_sites, kw_per_gbps);

  Scenario with_haps = scenario;
  if (!(with_haps.haps_capacity_mbps > 0.0)) with_haps.haps_capacity_mbps = kDefaultHapsMbps;
  const auto results = run_simulation(with_haps, initial);
  out.haps = summarize(results, total_capacity_mbps(initial) + with_haps.haps_capacity_mbps, kw_per_gbps);
  return out;
}

void write_table1_text(std::ostream& os, const ComparisonResult& r) {
  write_summary_text(os, "Original set of BSs", r.baseline);
  os << "  Rejected users (mean)         " << std::fixed << std::setprecision(2)
     << 100.0 * r.baseline.terrestrial_rejection << " %\n";
  write_summary_text(os,
                     "Densified Terrestrial Network (+" + std::to_string(r.densification.added_sites.size()) +
                         " BSs, " + std::to_string(r.densification.rounds) + " planning round(s))",
                     r.densified);
  write_summary_text(os, "HAPS-assisted Network", r.haps);
  os << "  Max dropped users in a slot   " << r.haps.max_dropped_users << '\n';
  os.unsetf(std::ios::floatfield);
}

void write_table1_csv(std::ostream& os, const ComparisonResult& r) {
  CsvWriter csv(os);
  csv.row("network", "total_capacity_mbps", "proportion_served", "utilization", "utilization_switchoff", "power_kw",
          "power_switchoff_kw", "terrestrial_rejection", "max_dropped_users", "added_sites");
  const auto emit = [&](const char* name, const MetricsSummary& m, std::size_t added) {
    csv.row(name, m.total_capacity_mbps, m.proportion_served, m.utilization, m.utilization_switchoff, m.power_kw,
            m.power_switchoff_kw, m.terrestrial_rejection, m.max_dropped_users, added);
  };
  emit("baseline", r.baseline, 0);
  emit("densified", r.densified, r.densification.added_sites.size());
  emit("haps", r.haps, 0);
}

std::string VariantSpec::label() const {
  switch (kind) {
    case VariantKind::baseline: return "baseline";
    case VariantKind::densified: return "densified";
    case VariantKind::haps: return "haps(" + format_mbps(haps_capacity_mbps) + ")";
  }
  return "unknown";
}

VariantSpec parse_variant(const std::string& text) {
  if (text == "baseline") return {VariantKind::baseline, 0.0};
  if (text == "densified") return {VariantKind::densified, 0.0};
  if (text.rfind("haps:", 0) == 0) {
    double mbps = 0.0;
    if (parse_number(std::string_view(text).substr(5), mbps) && mbps > 0.0) return {VariantKind::haps, mbps};
  }
  throw ConfigError("unknown variant '" + text + "' (expected baseline, densified or haps:<Mbps>)");
}

std::vector<SweepRecord> run_sweep(const Scenario& scenario, std::span<const double> mean_demands,
                                   std::span<const VariantSpec> variants,
                                   std::span<const CellSite> densified_sites, const SweepOptions& options) {
  validate(scenario);
  for (std::size_t i = 0; i < mean_demands.size(); ++i) {
    if (!(mean_demands[i] > 0.0)) throw ConfigError("run_sweep: mean demands must be positive");
    if (i > 0 && !(mean_demands[i] > mean_demands[i - 1])) throw ConfigError("run_sweep: mean demands must ascend");
  }
  const auto initial = place_initial_grid(scenario);
  const auto densified = concat(initial, densified_sites);

  const std::size_t jobs = mean_demands.size() * variants.size();
  std::vector<SweepRecord> records(jobs);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  const auto worker = [&] {
    for (std::size_t job = next++; job < jobs && !failed; job = next++) {
      try {
        const auto& variant = variants[job / mean_demands.size()];
        const double mean = mean_demands[job % mean_demands.size()];
        Scenario s = scenario;
        s.demand_sigma_mbps = sigma_for_mean(mean);
        s.haps_capacity_mbps = variant.kind == VariantKind::haps ? variant.haps_capacity_mbps : 0.0;
        std::span<const CellSite> sites = variant.kind == VariantKind::densified ? std::span<const CellSite>(densified)
                                                                                 : std::span<const CellSite>(initial);
        const auto results = run_simulation(s, sites);
        const auto m = summarize(results, total_capacity_mbps(sites) + s.haps_capacity_mbps, options.kw_per_gbps);
        records[job] = SweepRecord{mean, variant.label(), m.proportion_served, m.utilization, m.utilization_switchoff,
                                   m.power_kw};
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };

  unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs, 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);
  return records;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> records) {
  CsvWriter csv(os);
  csv.row("mean_demand_mbps", "variant", "proportion_served", "utilization", "utilization_switchoff", "power_kw");
  for (const auto& r : records) {
    csv.row(r.mean_demand_mbps, r.variant, r.proportion_served, r.utilization, r.utilization_switchoff, r.power_kw);
  }
}

std::vector<SweepRecord> select_variant(std::span<const SweepRecord> records, const std::string& label) {
  std::vector<SweepRecord> out;
  for (const auto& r : records) {
    if (r.variant == label) out.push_back(r);
  }
  std::sort(out.begin(), out.end(),
            [](const SweepRecord& a, const SweepRecord& b) { return a.mean_demand_mbps < b.mean_demand_mbps; });
  return out;
}

double critical_demand(std::span<const SweepRecord> curve) {
  double critical = -std::numeric_limits<double>::infinity();
  for (const auto& r : curve) {
    if (r.proportion_served < 1.0) break;
    critical = r.mean_demand_mbps;
  }
  return critical;
}

bool is_two_phase(std::span<const SweepRecord> curve, double noise) {
  if (curve.size() < 3) return false;
  std::size_t peak = 0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].utilization > curve[peak].utilization) peak = i;
  }
  if (peak == 0 || peak + 1 == curve.size()) return false;
  for (std::size_t i = 0; i < peak; ++i) {
    if (curve[i + 1].utilization < curve[i].utilization - noise) return false;
  }
  for (std::size_t i = peak; i + 1 < curve.size(); ++i) {
    if (curve[i + 1].utilization > curve[i].utilization + noise) return false;
  }
  return curve[peak].utilization - curve.front().utilization > noise &&
         curve[peak].utilization > curve.back().utilization;
}

std::vector<double> default_sweep_means() {
  std::vector<double> means;
  for (int m = 10; m <= 42; m += 2) means.push_back(m);
  return means;
}

}  // namespace hapsim
