// hapsim: command-line front end for the HAPS / densification RAN simulator.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "hapsim/config.hpp"
#include "hapsim/csv.hpp"
#include "hapsim/densification.hpp"
#include "hapsim/errors.hpp"
#include "hapsim/experiment.hpp"
#include "hapsim/link_budget.hpp"
#include "hapsim/metrics.hpp"

namespace {

using namespace hapsim;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("-c,--config", opts.config_path, "Scenario config file (INI)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "Override the scenario seed");
}

ExperimentConfig resolve(const CommonOptions& opts) {
  ExperimentConfig cfg;
  if (!opts.config_path.empty()) {
    cfg = load_config(opts.config_path);
  } else {
    std::istringstream empty;
    cfg = parse_config(empty);
  }
  if (opts.seed) cfg.scenario.seed = *opts.seed;
  return cfg;
}

// Writes to `path`, or stdout for "" / "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<CellSite> read_plan_file(const std::string& path, double radius) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open plan '" + path + "'");
  return read_plan_csv(in, radius);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-slotted RAN simulator: baseline grid vs densification vs HAPS overlay"};
  app.require_subcommand(1);

  // run
  CommonOptions run_opts;
  std::string run_plan, run_out, run_slots, run_rejected, run_traj;
  std::optional<double> run_haps;
  bool run_text = false;
  auto* run = app.add_subcommand("run", "Simulate one scenario and print its metrics");
  add_common(run, run_opts);
  run->add_option("--plan", run_plan, "Added-site CSV to deploy on top of the grid")->check(CLI::ExistingFile);
  run->add_option("--haps-mbps", run_haps, "Override HAPS capacity (0 disables)");
  run->add_option("-o,--out", run_out, "Summary CSV destination (default stdout)");
  run->add_option("--slots-csv", run_slots, "Per-slot per-site CSV");
  run->add_option("--rejected-csv", run_rejected, "Rejected demand-point log CSV");
  run->add_option("--trajectory", run_traj, "Per-slot user trajectory dump CSV (ts,user,x,y,demand)");
  run->add_flag("--text", run_text, "Human-readable summary instead of CSV");

  // densify
  CommonOptions dens_opts;
  std::string dens_log, dens_out;
  auto* dens = app.add_subcommand("densify", "Plan added BSs from a rejected-demand log");
  add_common(dens, dens_opts);
  dens->add_option("--log", dens_log, "Rejected log CSV; when absent the baseline is simulated and topped up "
                                      "until the replay serves everyone")
      ->check(CLI::ExistingFile);
  dens->add_option("-o,--out", dens_out, "Plan CSV destination (default stdout)");

  // sweep
  CommonOptions sweep_opts;
  std::string sweep_plan, sweep_out;
  std::optional<unsigned> sweep_threads;
  auto* sweep = app.add_subcommand("sweep", "Proportion served / utilization vs mean demand per variant");
  add_common(sweep, sweep_opts);
  sweep->add_option("--plan", sweep_plan, "Frozen added-site CSV for the densified variant")
      ->check(CLI::ExistingFile);
  sweep->add_option("-o,--out", sweep_out, "Sweep CSV destination (default stdout)");
  sweep->add_option("-j,--threads", sweep_threads, "Worker threads (0 = all cores)");

  // table1
  CommonOptions t1_opts;
  std::string t1_out;
  bool t1_csv = false;
  auto* table1 = app.add_subcommand("table1", "Baseline vs densified vs 2 Gbps HAPS comparison");
  add_common(table1, t1_opts);
  table1->add_flag("--csv", t1_csv, "CSV instead of text");
  table1->add_option("-o,--out", t1_out, "Destination (default stdout)");

  // calibrate
  CommonOptions cal_opts;
  std::optional<double> cal_target;
  std::optional<int> cal_slots;
  auto* cal = app.add_subcommand("calibrate", "Find the active-user count matching a baseline utilization");
  add_common(cal, cal_opts);
  cal->add_option("--target-utilization", cal_target, "Target utilization fraction");
  cal->add_option("--slots", cal_slots, "Slots per trial run");

  // linkbudget
  LinkBudgetParams lb;
  auto* link = app.add_subcommand("linkbudget", "Parity distance, latency and footprint of a HAPS link");
  link->add_option("--altitude", lb.haps_altitude_m, "HAPS altitude [m]")->capture_default_str();
  link->add_option("--haps-exponent", lb.haps_pathloss_exponent, "HAPS-user path-loss exponent")->capture_default_str();
  link->add_option("--terrestrial-exponent", lb.terrestrial_pathloss_exponent, "BS-user path-loss exponent")
      ->capture_default_str();
  link->add_option("--elevation", lb.min_elevation_deg, "Minimum elevation angle [deg]")->capture_default_str();
  link->add_option("--speed", lb.propagation_speed_mps, "Propagation speed [m/s]")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto cfg = resolve(run_opts);
      if (run_haps) cfg.scenario.haps_capacity_mbps = *run_haps;
      auto sites = place_initial_grid(cfg.scenario);
      if (!run_plan.empty()) {
        const auto added = read_plan_file(run_plan, cfg.scenario.bs_coverage_radius_m);
        sites.insert(sites.end(), added.begin(), added.end());
      }
      std::unique_ptr<std::ofstream> traj;
      std::optional<CsvWriter> traj_csv;
      if (!run_traj.empty()) {
        traj = std::make_unique<std::ofstream>(run_traj);
        if (!*traj) throw ConfigError("cannot write '" + run_traj + "'");
        traj_csv.emplace(*traj);
        traj_csv->row("ts", "user_id", "x", "y", "demand");
      }
      SlotObserver observer;
      if (traj_csv) {
        observer = [&](const TimeSlotResult& r, std::span<const UserState> users) {
          for (const auto& u : users) traj_csv->row(r.ts_index, u.id, u.position.x_m, u.position.y_m, u.demand_mbps);
        };
      }
      const auto results = run_simulation(cfg.scenario, sites, observer);
      const auto summary =
          summarize(results, total_capacity_mbps(sites) + cfg.scenario.haps_capacity_mbps, cfg.kw_per_gbps);
      if (!run_slots.empty()) {
        Output o(run_slots);
        write_slot_csv(o.stream(), results);
      }
      if (!run_rejected.empty()) {
        Output o(run_rejected);
        write_rejected_csv(o.stream(), results);
      }
      Output out(run_out);
      if (run_text) {
        write_summary_text(out.stream(), "Scenario summary", summary);
      } else {
        write_summary_csv(out.stream(), summary);
      }
    } else if (*dens) {
      const auto cfg = resolve(dens_opts);
      const auto initial = place_initial_grid(cfg.scenario);
      std::vector<CellSite> added;
      if (!dens_log.empty()) {
        std::ifstream in(dens_log);
        const auto points = read_rejected_csv(in);
        PlannerOptions popts;
        popts.first_site_id = static_cast<int>(initial.size());
        added = plan_sites(points, cfg.scenario.bs_coverage_radius_m, cfg.scenario.bs_capacity_mbps, popts).new_sites;
      } else {
        const auto outcome = densify(cfg.scenario, initial);
        if (!outcome.fully_served) std::cerr << "warning: replay still rejects users after top-up rounds\n";
        added = outcome.added_sites;
      }
      Output out(dens_out);
      write_plan_csv(out.stream(), added);
    } else if (*sweep) {
      const auto cfg = resolve(sweep_opts);
      std::vector<CellSite> added;
      bool needs_plan = false;
      for (const auto& v : cfg.sweep_variants) needs_plan |= v.kind == VariantKind::densified;
      if (!sweep_plan.empty()) {
        added = read_plan_file(sweep_plan, cfg.scenario.bs_coverage_radius_m);
      } else if (needs_plan) {
        Scenario base = cfg.scenario;
        base.haps_capacity_mbps = 0.0;
        added = densify(base, place_initial_grid(base)).added_sites;
      }
      SweepOptions sopts;
      sopts.kw_per_gbps = cfg.kw_per_gbps;
      sopts.threads = sweep_threads.value_or(cfg.sweep_threads);
      const auto records = run_sweep(cfg.scenario, cfg.sweep_means, cfg.sweep_variants, added, sopts);
      Output out(sweep_out);
      write_sweep_csv(out.stream(), records);
    } else if (*table1) {
      const auto cfg = resolve(t1_opts);
      const auto result = run_table1(cfg.scenario, cfg.kw_per_gbps);
      Output out(t1_out);
      if (t1_csv) {
        write_table1_csv(out.stream(), result);
      } else {
        write_table1_text(out.stream(), result);
      }
    } else if (*cal) {
      const auto cfg = resolve(cal_opts);
      auto copts = cfg.calibration;
      if (cal_target) copts.target_utilization = *cal_target;
      if (cal_slots) copts.slots = *cal_slots;
      const auto r = calibrate_load(cfg.scenario, copts);
      CsvWriter csv(std::cout);
      csv.row("active_user_count", "achieved_utilization", "target_utilization", "achieved_rejection",
              "target_rejection", "within_tolerance", "below_minimum", "bracket_lo", "bracket_hi");
      csv.row(r.active_user_count, r.achieved_utilization, r.target_utilization, r.achieved_rejection,
              r.target_rejection, r.within_tolerance ? 1 : 0, r.below_minimum ? 1 : 0, r.lo, r.hi);
    } else if (*link) {
      CsvWriter csv(std::cout);
      csv.row("parity_distance_m", "propagation_latency_ms", "footprint_radius_m");
      csv.row(parity_distance_m(lb), propagation_latency_ms(lb), footprint_radius_m(lb));
    }
  } catch (const CalibrationError& e) {
    std::cerr << "error: " << e.what() << " (bracket " << e.lower_bracket() << ".." << e.upper_bracket() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
