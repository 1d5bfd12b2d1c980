#include "hapsim/association.hpp"

#include <algorithm>
#include <numeric>

#include "hapsim/errors.hpp"

namespace hapsim {

namespace {

std::vector<std::size_t> random_order(std::size_t n, RngStreams::Engine& eng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), eng);
  return order;
}

}  // namespace

int TimeSlotResult::served_user_count() const noexcept {
  int n = 0;
  for (const auto& s : sites) n += s.served_user_count;
  return n;
}

double TimeSlotResult::served_demand_mbps() const noexcept {
  double d = 0.0;
  for (const auto& s : sites) d += s.served_demand_mbps;
  return d;
}

TimeSlotResult associate_slot(std::span<UserState> users, std::span<const CellSite> sites,
                              int ts_index, RngStreams& rng) {
  TimeSlotResult result;
  result.ts_index = ts_index;
  result.active_user_count = static_cast<int>(users.size());

  // Position of each site's load record in result.sites (terrestrial only).
  std::vector<std::size_t> load_of_site(sites.size(), 0);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (!sites[i].is_terrestrial()) continue;
    load_of_site[i] = result.sites.size();
    result.sites.push_back(SiteLoad{.site_id = sites[i].id, .capacity_mbps = sites[i].capacity_mbps});
  }
  if (result.sites.empty()) throw ConfigError("associate_slot: no terrestrial site");
  const SiteLocator locator(sites);
  std::vector<bool> closed(result.sites.size(), false);

  for (const std::size_t idx : random_order(users.size(), rng[Stream::admission])) {
    auto& u = users[idx];
    const std::size_t site_index = locator.nearest_index(u.position);
    const CellSite& site = sites[site_index];
    SiteLoad& load = result.sites[load_of_site[site_index]];
    if (!in_coverage(site, u.position)) {
      u.assignment = {AssignmentKind::rejected_coverage, site.id};
      ++load.rejected_coverage_count;
      result.rejected_points.push_back({u.position, u.demand_mbps, ts_index, RejectReason::coverage, u.id});
    } else if (closed[load_of_site[site_index]] || load.capacity_mbps - load.served_demand_mbps < u.demand_mbps) {
      // A cell that cannot fit the next demand is full for the rest of the slot.
      closed[load_of_site[site_index]] = true;
      u.assignment = {AssignmentKind::rejected_capacity, site.id};
      ++load.rejected_capacity_count;
      result.rejected_points.push_back({u.position, u.demand_mbps, ts_index, RejectReason::capacity, u.id});
    } else {
      u.assignment = {AssignmentKind::served_by_site, site.id};
      load.served_demand_mbps += u.demand_mbps;
      ++load.served_user_count;
    }
  }
  result.dropped_user_count = static_cast<int>(result.rejected_points.size());
  return result;
}

TimeSlotResult haps_overlay(TimeSlotResult result, const CellSite& haps, RngStreams& rng,
                            std::span<UserState> users) {
  if (haps.kind != SiteKind::haps) throw ConfigError("haps_overlay: site is not a HAPS");
  result.haps_capacity_mbps = haps.capacity_mbps;
  // The permutation is drawn even with nothing to admit so the stream
  // position depends only on the slot count.
  const auto order = random_order(result.rejected_points.size(), rng[Stream::haps_admission]);
  std::vector<bool> admitted(result.rejected_points.size(), false);
  double residual = haps.capacity_mbps - result.haps_served_demand_mbps;
  // Admission stops at the first user that does not fit: the admitted set is
  // a prefix of the permutation, so more capacity never admits fewer users.
  for (const std::size_t idx : order) {
    const auto& p = result.rejected_points[idx];
    if (residual < p.demand_mbps) break;
    residual -= p.demand_mbps;
    admitted[idx] = true;
    result.haps_served_demand_mbps += p.demand_mbps;
    ++result.haps_served_user_count;
  }

  std::vector<DemandPoint> still_rejected;
  for (std::size_t i = 0; i < result.rejected_points.size(); ++i) {
    const auto& p = result.rejected_points[i];
    if (!admitted[i]) {
      still_rejected.push_back(p);
      continue;
    }
    if (users.empty()) continue;
    UserState* user = nullptr;
    const auto pos = static_cast<std::size_t>(p.user_id);
    if (p.user_id >= 0 && pos < users.size() && users[pos].id == p.user_id) {
      user = &users[pos];
    } else {
      auto it = std::find_if(users.begin(), users.end(), [&](const UserState& u) { return u.id == p.user_id; });
      if (it != users.end()) user = &*it;
    }
    if (user != nullptr) user->assignment = {AssignmentKind::served_by_haps, haps.id};
  }
  result.rejected_points = std::move(still_rejected);
  result.dropped_user_count = static_cast<int>(result.rejected_points.size());
  return result;
}

std::vector<TimeSlotResult> run_simulation(const Scenario& scenario, std::span<const CellSite> sites,
                                           const SlotObserver& observer) {
  validate(scenario);
  validate_sites(scenario, sites);

  std::optional<CellSite> haps;
  if (scenario.haps_capacity_mbps > 0.0) {
    int next_id = 0;
    for (const auto& s : sites) next_id = std::max(next_id, s.id + 1);
    haps = make_haps_site(scenario, next_id);
  }

  RngStreams rng(scenario.seed);
  auto users = init_users(scenario, rng);
  std::vector<TimeSlotResult> results;
  results.reserve(static_cast<std::size_t>(scenario.num_ts));
  for (int ts = 0; ts < scenario.num_ts; ++ts) {
    step_mobility(users, scenario, rng);
    sample_demands(users, scenario.demand_sigma_mbps, rng);
    auto result = associate_slot(users, sites, ts, rng);
    if (haps) result = haps_overlay(std::move(result), *haps, rng, users);
    if (observer) observer(result, users);
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace hapsim
