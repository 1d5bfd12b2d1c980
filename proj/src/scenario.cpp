#include "hapsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "hapsim/errors.hpp"
#include "hapsim/link_budget.hpp"

namespace hapsim {

double distance(const Position& a, const Position& b) noexcept {
  return std::hypot(a.x_m - b.x_m, a.y_m - b.y_m);
}

void validate(const Scenario& s) {
  if (!(s.area_width_m > 0.0) || !(s.area_height_m > 0.0)) {
    throw ConfigError("scenario: area dimensions must be > 0");
  }
  if (s.bs_rows < 1 || s.bs_cols < 1) throw ConfigError("scenario: grid needs at least one row and column");
  if (!(s.bs_coverage_radius_m >= 0.0)) throw ConfigError("scenario: coverage radius must be >= 0");
  if (!(s.bs_capacity_mbps >= 0.0) || !(s.haps_capacity_mbps >= 0.0)) {
    throw ConfigError("scenario: capacities must be >= 0");
  }
  if (!(s.haps_altitude_m > 0.0)) throw ConfigError("scenario: HAPS altitude must be > 0");
  if (s.num_users < 0 || s.active_user_count < 0) throw ConfigError("scenario: user counts must be >= 0");
  if (s.active_user_count > s.num_users) {
    throw ConfigError("scenario: active_user_count (" + std::to_string(s.active_user_count) +
                      ") exceeds num_users (" + std::to_string(s.num_users) + ")");
  }
  if (s.num_ts < 1) throw ConfigError("scenario: num_ts must be >= 1");
  if (!(s.ts_duration_s >= 0.0)) throw ConfigError("scenario: ts_duration_s must be >= 0");
  if (!(s.demand_sigma_mbps >= 0.0)) throw ConfigError("scenario: demand sigma must be >= 0");
  const auto& m = s.mobility;
  if (!(m.speed_min_mps >= 0.0) || !(m.speed_min_mps <= m.speed_max_mps)) {
    throw ConfigError("scenario: need 0 <= speed_min <= speed_max");
  }
  if (!(m.pause_prob >= 0.0 && m.pause_prob <= 1.0)) throw ConfigError("scenario: pause_prob must lie in [0, 1]");
}

bool contains(const Scenario& s, const Position& p) noexcept {
  return p.x_m >= 0.0 && p.x_m <= s.area_width_m && p.y_m >= 0.0 && p.y_m <= s.area_height_m;
}

std::string_view to_string(SiteKind kind) noexcept {
  switch (kind) {
    case SiteKind::terrestrial_initial: return "terrestrial_initial";
    case SiteKind::terrestrial_added: return "terrestrial_added";
    case SiteKind::haps: return "haps";
  }
  return "unknown";
}

std::vector<CellSite> place_initial_grid(const Scenario& s) {
  if (!(s.area_width_m > 0.0) || !(s.area_height_m > 0.0) || s.bs_rows < 1 || s.bs_cols < 1) {
    throw ConfigError("place_initial_grid: nonpositive area or grid dimensions");
  }
  const double dx = s.area_width_m / s.bs_cols;
  const double dy = s.area_height_m / s.bs_rows;
  std::vector<CellSite> sites;
  sites.reserve(static_cast<std::size_t>(s.bs_rows) * s.bs_cols);
  for (int i = 0; i < s.bs_rows; ++i) {
    for (int j = 0; j < s.bs_cols; ++j) {
      sites.push_back(CellSite{.id = i * s.bs_cols + j,
                               .position = {(j + 0.5) * dx, (i + 0.5) * dy},
                               .kind = SiteKind::terrestrial_initial,
                               .coverage_radius_m = s.bs_coverage_radius_m,
                               .capacity_mbps = s.bs_capacity_mbps});
    }
  }
  return sites;
}

CellSite make_haps_site(const Scenario& s, int id) {
  LinkBudgetParams lb;
  lb.haps_altitude_m = s.haps_altitude_m;
  return CellSite{.id = id,
                  .position = {s.area_width_m / 2.0, s.area_height_m / 2.0},
                  .kind = SiteKind::haps,
                  .coverage_radius_m = footprint_radius_m(lb),
                  .capacity_mbps = s.haps_capacity_mbps};
}

bool in_coverage(const CellSite& site, const Position& p) noexcept {
  if (site.kind == SiteKind::haps) return true;
  return distance(site.position, p) <= site.coverage_radius_m;
}

const CellSite& nearest_site(std::span<const CellSite> sites, const Position& p) {
  const CellSite* best = nullptr;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (const auto& site : sites) {
    if (!site.is_terrestrial()) continue;
    const double ddx = site.position.x_m - p.x_m;
    const double ddy = site.position.y_m - p.y_m;
    const double d2 = ddx * ddx + ddy * ddy;
    if (d2 < best_d2 || (d2 == best_d2 && site.id < best->id)) {
      best = &site;
      best_d2 = d2;
    }
  }
  if (best == nullptr) throw ConfigError("nearest_site: no terrestrial site available");
  return *best;
}

SiteLocator::SiteLocator(std::span<const CellSite> sites) : sites_(sites) {
  std::vector<std::size_t> terrestrial;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i].is_terrestrial()) terrestrial.push_back(i);
  }
  if (terrestrial.empty()) throw ConfigError("SiteLocator: no terrestrial site available");
  double max_x = sites[terrestrial.front()].position.x_m;
  double max_y = sites[terrestrial.front()].position.y_m;
  min_x_ = max_x;
  min_y_ = max_y;
  for (const auto i : terrestrial) {
    min_x_ = std::min(min_x_, sites[i].position.x_m);
    min_y_ = std::min(min_y_, sites[i].position.y_m);
    max_x = std::max(max_x, sites[i].position.x_m);
    max_y = std::max(max_y, sites[i].position.y_m);
  }
  const double span = std::max({max_x - min_x_, max_y - min_y_, 1.0});
  cell_ = std::max(span / std::ceil(std::sqrt(static_cast<double>(terrestrial.size()))), 1e-9);
  nx_ = static_cast<int>((max_x - min_x_) / cell_) + 1;
  ny_ = static_cast<int>((max_y - min_y_) / cell_) + 1;
  buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
  for (const auto i : terrestrial) {
    const int bx = std::min(nx_ - 1, static_cast<int>((sites[i].position.x_m - min_x_) / cell_));
    const int by = std::min(ny_ - 1, static_cast<int>((sites[i].position.y_m - min_y_) / cell_));
    buckets_[static_cast<std::size_t>(by) * nx_ + bx].push_back(i);
  }
}

std::size_t SiteLocator::nearest_index(const Position& p) const {
  const double fx = std::floor((p.x_m - min_x_) / cell_);
  const double fy = std::floor((p.y_m - min_y_) / cell_);
  const int bx = static_cast<int>(std::clamp(fx, -1.0, static_cast<double>(nx_)));
  const int by = static_cast<int>(std::clamp(fy, -1.0, static_cast<double>(ny_)));
  // Distance from p to the clamped home bucket; rings are measured from there.
  const double ox = std::max({0.0, min_x_ + bx * cell_ - p.x_m, p.x_m - (min_x_ + (bx + 1) * cell_)});
  const double oy = std::max({0.0, min_y_ + by * cell_ - p.y_m, p.y_m - (min_y_ + (by + 1) * cell_)});
  const double offset = std::hypot(ox, oy);

  std::size_t best = sites_.size();
  double best_d2 = std::numeric_limits<double>::infinity();
  const auto visit = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= nx_ || y >= ny_) return;
    for (const auto i : buckets_[static_cast<std::size_t>(y) * nx_ + x]) {
      const double dx = sites_[i].position.x_m - p.x_m;
      const double dy = sites_[i].position.y_m - p.y_m;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best_d2 || (d2 == best_d2 && sites_[i].id < sites_[best].id)) {
        best = i;
        best_d2 = d2;
      }
    }
  };
  const int max_ring = std::max(nx_, ny_) + 2;
  for (int r = 0; r <= max_ring; ++r) {
    // Unvisited sites (ring r and beyond) are at least (r - 1) * cell away
    // from the home bucket.
    if (best < sites_.size()) {
      const double reach = (r - 1) * cell_ - offset;
      if (reach > 0.0 && reach * reach > best_d2) break;
    }
    if (r == 0) {
      visit(bx, by);
      continue;
    }
    for (int x = bx - r; x <= bx + r; ++x) {
      visit(x, by - r);
      visit(x, by + r);
    }
    for (int y = by - r + 1; y <= by + r - 1; ++y) {
      visit(bx - r, y);
      visit(bx + r, y);
    }
  }
  return best;
}

double total_capacity_mbps(std::span<const CellSite> sites) noexcept {
  double total = 0.0;
  for (const auto& site : sites) total += site.capacity_mbps;
  return total;
}

void validate_sites(const Scenario& s, std::span<const CellSite> sites) {
  std::set<int> ids;
  bool any_terrestrial = false;
  for (const auto& site : sites) {
    if (!ids.insert(site.id).second) throw ConfigError("site list: duplicate id " + std::to_string(site.id));
    if (!(site.capacity_mbps >= 0.0)) throw ConfigError("site list: negative capacity at id " + std::to_string(site.id));
    if (site.is_terrestrial()) {
      any_terrestrial = true;
      if (!contains(s, site.position)) {
        throw ConfigError("site list: terrestrial site " + std::to_string(site.id) + " lies outside the area");
      }
    }
  }
  if (!any_terrestrial) throw ConfigError("site list: no terrestrial site");
}

}  // namespace hapsim
