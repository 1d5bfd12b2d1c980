#pragma once

// Simulation world: area geometry, site placement and coverage tests.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace hapsim {

struct Position {
  double x_m = 0.0;
  double y_m = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

double distance(const Position& a, const Position& b) noexcept;

/// Random-waypoint parameters. A user reaching its waypoint pauses for one
/// slot with probability `pause_prob`.
struct MobilityParams {
  double speed_min_mps = 1.0;
  double speed_max_mps = 2.0;
  double pause_prob = 0.2;
};

/// Full parameterization of one experiment. Defaults reproduce the
/// 8x8 km urban case: 36 macro cells of 700 m / 1 Gbps, 1440 one-minute slots.
struct Scenario {
  double area_width_m = 8000.0;
  double area_height_m = 8000.0;
  int bs_rows = 6;
  int bs_cols = 6;
  double bs_coverage_radius_m = 700.0;
  double bs_capacity_mbps = 1000.0;
  double haps_capacity_mbps = 0.0;  // 0 = no HAPS
  double haps_altitude_m = 20000.0;
  int num_users = 14000;
  int active_user_count = 2556;
  double ts_duration_s = 60.0;
  int num_ts = 1440;
  double demand_sigma_mbps = 20.0;
  MobilityParams mobility{};
  std::uint64_t seed = 1;
};

/// Throws ConfigError on the first violated invariant.
void validate(const Scenario& scenario);

bool contains(const Scenario& scenario, const Position& p) noexcept;

enum class SiteKind { terrestrial_initial, terrestrial_added, haps };

std::string_view to_string(SiteKind kind) noexcept;

struct CellSite {
  int id = 0;
  Position position{};
  SiteKind kind = SiteKind::terrestrial_initial;
  double coverage_radius_m = 0.0;
  double capacity_mbps = 0.0;

  bool is_terrestrial() const noexcept { return kind != SiteKind::haps; }
};

/// bs_rows x bs_cols cell-centred sites; row-major ids starting at 0.
std::vector<CellSite> place_initial_grid(const Scenario& scenario);

/// HAPS super macro site above the area centre. Its footprint radius comes
/// from the elevation-limited link budget at `scenario.haps_altitude_m`.
CellSite make_haps_site(const Scenario& scenario, int id);

/// Inclusive disc test for terrestrial sites; always true for a HAPS.
bool in_coverage(const CellSite& site, const Position& p) noexcept;

/// Closest terrestrial site, lowest id on ties. Throws ConfigError when no
/// terrestrial site is present.
const CellSite& nearest_site(std::span<const CellSite> sites, const Position& p);

/// Bucket-grid accelerated equivalent of nearest_site for repeated queries
/// against a fixed site list. Returns indices into that list.
class SiteLocator {
 public:
  explicit SiteLocator(std::span<const CellSite> sites);

  std::size_t nearest_index(const Position& p) const;
  const CellSite& nearest(const Position& p) const { return sites_[nearest_index(p)]; }

 private:
  std::span<const CellSite> sites_;
  double min_x_ = 0.0;
  double min_y_ = 0.0;
  double cell_ = 1.0;
  int nx_ = 1;
  int ny_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

double total_capacity_mbps(std::span<const CellSite> sites) noexcept;

/// Checks unique ids, non-negative capacities, terrestrial sites inside the area.
void validate_sites(const Scenario& scenario, std::span<const CellSite> sites);

}  // namespace hapsim
