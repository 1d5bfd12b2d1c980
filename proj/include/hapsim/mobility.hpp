#pragma once

// Random-waypoint user mobility and half-normal per-slot demand sampling.

#include <span>
#include <vector>

#include "hapsim/rng.hpp"
#include "hapsim/scenario.hpp"

namespace hapsim {

enum class AssignmentKind { dropped, served_by_site, served_by_haps, rejected_coverage, rejected_capacity };

struct Assignment {
  AssignmentKind kind = AssignmentKind::dropped;
  int site_id = -1;  // valid for served_by_site / served_by_haps

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct UserState {
  int id = 0;
  Position position{};
  Position waypoint{};
  double speed_mps = 0.0;
  bool paused = false;
  double demand_mbps = 0.0;
  Assignment assignment{};
};

/// `active_user_count` users at uniform positions with fresh waypoints and
/// speeds. Draws from the positions, waypoints and speeds streams.
std::vector<UserState> init_users(const Scenario& scenario, RngStreams& rng);

/// Advances every user by one slot of `ts_duration_s`.
void step_mobility(std::span<UserState> users, const Scenario& scenario, RngStreams& rng);

/// sigma of the half-normal whose mean is `mean_mbps`: mean * sqrt(pi / 2).
double sigma_for_mean(double mean_mbps);

/// Mean of |N(0, sigma^2)|: sigma * sqrt(2 / pi).
double half_normal_mean(double sigma_mbps) noexcept;

/// Variance of |N(0, sigma^2)|: sigma^2 * (1 - 2 / pi).
double half_normal_variance(double sigma_mbps) noexcept;

/// Redraws demand_mbps = |z|, z ~ N(0, sigma^2), independently for every user.
void sample_demands(std::span<UserState> users, double sigma_mbps, RngStreams& rng);

}  // namespace hapsim
