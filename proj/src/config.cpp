#include "hapsim/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hapsim/csv.hpp"
#include "hapsim/errors.hpp"
#include "hapsim/mobility.hpp"

namespace hapsim {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"area", {"width_m", "height_m"}},
      {"grid", {"rows", "cols", "coverage_radius_m", "capacity_mbps"}},
      {"haps", {"capacity_mbps", "altitude_m"}},
      {"users", {"num_users", "active_user_count"}},
      {"time", {"ts_duration_s", "num_ts"}},
      {"traffic", {"demand_sigma_mbps", "mean_demand_mbps"}},
      {"mobility", {"speed_min_mps", "speed_max_mps", "pause_prob"}},
      {"run", {"seed"}},
      {"power", {"kw_per_gbps"}},
      {"sweep", {"means", "variants", "threads"}},
      {"calibration", {"target_utilization", "target_rejection", "tolerance", "slots"}},
  };
  return keys;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

template <typename T>
void read(const pt::ptree& tree, const std::string& path, T& out) {
  const auto value = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'));
  if (!value) return;
  if (!parse_number(trim(*value), out)) throw ConfigError("config: bad value for " + path + ": '" + *value + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  for (auto& item : split_csv_line(text)) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) throw ConfigError("config: unknown section [" + section + "]");
    for (const auto& [key, _] : body) {
      if (!it->second.contains(key)) throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
    }
  }

  ExperimentConfig cfg;
  Scenario& s = cfg.scenario;
  read(tree, "area.width_m", s.area_width_m);
  read(tree, "area.height_m", s.area_height_m);
  read(tree, "grid.rows", s.bs_rows);
  read(tree, "grid.cols", s.bs_cols);
  read(tree, "grid.coverage_radius_m", s.bs_coverage_radius_m);
  read(tree, "grid.capacity_mbps", s.bs_capacity_mbps);
  read(tree, "haps.capacity_mbps", s.haps_capacity_mbps);
  read(tree, "haps.altitude_m", s.haps_altitude_m);
  read(tree, "users.num_users", s.num_users);
  cfg.active_user_count_given = tree.get_optional<std::string>("users.active_user_count").has_value();
  s.active_user_count = kCalibratedActiveUsers;
  read(tree, "users.active_user_count", s.active_user_count);
  read(tree, "time.ts_duration_s", s.ts_duration_s);
  read(tree, "time.num_ts", s.num_ts);
  if (tree.get_optional<std::string>("traffic.demand_sigma_mbps") &&
      tree.get_optional<std::string>("traffic.mean_demand_mbps")) {
    throw ConfigError("config: give either demand_sigma_mbps or mean_demand_mbps, not both");
  }
  read(tree, "traffic.demand_sigma_mbps", s.demand_sigma_mbps);
  if (tree.get_optional<std::string>("traffic.mean_demand_mbps")) {
    double mean = 0.0;
    read(tree, "traffic.mean_demand_mbps", mean);
    s.demand_sigma_mbps = sigma_for_mean(mean);
  }
  read(tree, "mobility.speed_min_mps", s.mobility.speed_min_mps);
  read(tree, "mobility.speed_max_mps", s.mobility.speed_max_mps);
  read(tree, "mobility.pause_prob", s.mobility.pause_prob);
  read(tree, "run.seed", s.seed);
  read(tree, "power.kw_per_gbps", cfg.kw_per_gbps);

  if (const auto means = tree.get_optional<std::string>("sweep.means")) {
    cfg.sweep_means.clear();
    for (const auto& item : split_list(*means)) {
      double m = 0.0;
      if (!parse_number(item, m)) throw ConfigError("config: bad sweep mean '" + item + "'");
      cfg.sweep_means.push_back(m);
    }
  }
  if (const auto variants = tree.get_optional<std::string>("sweep.variants")) {
    cfg.sweep_variants.clear();
    for (const auto& item : split_list(*variants)) cfg.sweep_variants.push_back(parse_variant(item));
  }
  read(tree, "sweep.threads", cfg.sweep_threads);
  read(tree, "calibration.target_utilization", cfg.calibration.target_utilization);
  read(tree, "calibration.target_rejection", cfg.calibration.target_rejection);
  read(tree, "calibration.tolerance", cfg.calibration.tolerance);
  read(tree, "calibration.slots", cfg.calibration.slots);

  // Keep a calibrated default consistent with a smaller population.
  if (!cfg.active_user_count_given) s.active_user_count = std::min(s.active_user_count, s.num_users);
  validate(s);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

}  // namespace hapsim
