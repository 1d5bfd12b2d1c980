#pragma once

// Per-slot admission of users to their nearest terrestrial cell, with an
// optional HAPS overlay that picks up rejected users.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hapsim/mobility.hpp"
#include "hapsim/rng.hpp"
#include "hapsim/scenario.hpp"

namespace hapsim {

enum class RejectReason { coverage, capacity };

/// A rejected (position, demand) pair, as fed to the densification planner.
struct DemandPoint {
  Position position{};
  double demand_mbps = 0.0;
  int ts_index = 0;
  RejectReason reason = RejectReason::coverage;
  int user_id = -1;
};

struct SiteLoad {
  int site_id = 0;
  double capacity_mbps = 0.0;
  double served_demand_mbps = 0.0;
  int served_user_count = 0;
  int rejected_coverage_count = 0;
  int rejected_capacity_count = 0;
};

struct TimeSlotResult {
  int ts_index = 0;
  int active_user_count = 0;
  /// One entry per terrestrial site, in site-list order.
  std::vector<SiteLoad> sites;
  /// Users not served by any node this slot (dropped).
  std::vector<DemandPoint> rejected_points;
  double haps_capacity_mbps = 0.0;
  double haps_served_demand_mbps = 0.0;
  int haps_served_user_count = 0;
  int dropped_user_count = 0;

  int served_user_count() const noexcept;
  double served_demand_mbps() const noexcept;
};

/// Processes users in a random permutation drawn from the admission stream.
/// Each user goes to its nearest terrestrial site and is admitted whole if it
/// is in coverage and the site's residual capacity covers its demand. The
/// first demand a site cannot fit closes it: every later user mapped to it in
/// the same slot is rejected for capacity. Updates every user's assignment.
TimeSlotResult associate_slot(std::span<UserState> users, std::span<const CellSite> sites,
                              int ts_index, RngStreams& rng);

/// Offers every rejected user to `haps` in a random permutation drawn from
/// the haps_admission stream; admits while residual capacity covers demand
/// and stops at the first user that does not fit.
/// When `users` is non-empty their assignments are updated as well.
TimeSlotResult haps_overlay(TimeSlotResult result, const CellSite& haps, RngStreams& rng,
                            std::span<UserState> users = {});

/// Called after every slot with the users as they were associated.
using SlotObserver = std::function<void(const TimeSlotResult&, std::span<const UserState>)>;

/// Full run: init users, then per slot step mobility, sample demands,
/// associate and (if haps_capacity_mbps > 0) apply the HAPS overlay.
/// `sites` holds the terrestrial sites; the HAPS is derived from the scenario.
std::vector<TimeSlotResult> run_simulation(const Scenario& scenario, std::span<const CellSite> sites,
                                           const SlotObserver& observer = {});

}  // namespace hapsim
