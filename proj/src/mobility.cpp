#include "hapsim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hapsim/errors.hpp"

namespace hapsim {

namespace {

Position uniform_position(const Scenario& s, RngStreams::Engine& eng) {
  std::uniform_real_distribution<double> ux(0.0, s.area_width_m);
  std::uniform_real_distribution<double> uy(0.0, s.area_height_m);
  const double x = ux(eng);
  const double y = uy(eng);
  return {x, y};
}

double uniform_speed(const MobilityParams& m, RngStreams::Engine& eng) {
  if (m.speed_max_mps <= m.speed_min_mps) return m.speed_min_mps;
  return std::uniform_real_distribution<double>(m.speed_min_mps, m.speed_max_mps)(eng);
}

Position clamp_to_area(const Scenario& s, Position p) {
  p.x_m = std::clamp(p.x_m, 0.0, s.area_width_m);
  p.y_m = std::clamp(p.y_m, 0.0, s.area_height_m);
  return p;
}

}  // namespace

std::vector<UserState> init_users(const Scenario& s, RngStreams& rng) {
  std::vector<UserState> users(static_cast<std::size_t>(s.active_user_count));
  for (std::size_t i = 0; i < users.size(); ++i) {
    auto& u = users[i];
    u.id = static_cast<int>(i);
    u.position = uniform_position(s, rng[Stream::positions]);
    u.waypoint = uniform_position(s, rng[Stream::waypoints]);
    u.speed_mps = uniform_speed(s.mobility, rng[Stream::speeds]);
  }
  return users;
}

void step_mobility(std::span<UserState> users, const Scenario& s, RngStreams& rng) {
  std::bernoulli_distribution pause(s.mobility.pause_prob);
  for (auto& u : users) {
    if (u.paused) {
      // The pause slot is spent in place; a new leg starts next slot.
      u.paused = false;
      u.waypoint = uniform_position(s, rng[Stream::waypoints]);
      u.speed_mps = uniform_speed(s.mobility, rng[Stream::speeds]);
      continue;
    }
    const double dx = u.waypoint.x_m - u.position.x_m;
    const double dy = u.waypoint.y_m - u.position.y_m;
    const double remaining = std::hypot(dx, dy);
    const double travel = u.speed_mps * s.ts_duration_s;
    if (travel < remaining) {
      const double f = travel / remaining;
      u.position = clamp_to_area(s, {u.position.x_m + f * dx, u.position.y_m + f * dy});
      continue;
    }
    u.position = u.waypoint;
    if (pause(rng[Stream::pauses])) {
      u.paused = true;
    } else {
      u.waypoint = uniform_position(s, rng[Stream::waypoints]);
      u.speed_mps = uniform_speed(s.mobility, rng[Stream::speeds]);
    }
  }
}

double sigma_for_mean(double mean_mbps) {
  if (!(mean_mbps >= 0.0)) throw ConfigError("sigma_for_mean: mean must be >= 0");
  return mean_mbps * std::sqrt(std::numbers::pi / 2.0);
}

double half_normal_mean(double sigma_mbps) noexcept { return sigma_mbps * std::sqrt(2.0 / std::numbers::pi); }

double half_normal_variance(double sigma_mbps) noexcept {
  return sigma_mbps * sigma_mbps * (1.0 - 2.0 / std::numbers::pi);
}

void sample_demands(std::span<UserState> users, double sigma_mbps, RngStreams& rng) {
  if (!(sigma_mbps >= 0.0)) throw ConfigError("sample_demands: sigma must be >= 0");
  std::normal_distribution<double> z(0.0, 1.0);
  auto& eng = rng[Stream::demands];
  for (auto& u : users) u.demand_mbps = std::abs(z(eng)) * sigma_mbps;
}

}  // namespace hapsim
