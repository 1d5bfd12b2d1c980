#include <doctest.h>

#include <random>
#include <sstream>

#include "hapsim/errors.hpp"
#include "hapsim/metrics.hpp"

using namespace hapsim;

namespace {

// Slot with per-site (served demand, served users), HAPS tallies and drops.
TimeSlotResult slot(std::vector<std::pair<double, int>> loads, int active, double haps_demand = 0.0,
                    int haps_users = 0, double haps_capacity = 0.0) {
  TimeSlotResult r;
  r.active_user_count = active;
  for (std::size_t i = 0; i < loads.size(); ++i) {
    r.sites.push_back({.site_id = static_cast<int>(i), .capacity_mbps = 1000.0,
                       .served_demand_mbps = loads[i].first, .served_user_count = loads[i].second});
  }
  r.haps_capacity_mbps = haps_capacity;
  r.haps_served_demand_mbps = haps_demand;
  r.haps_served_user_count = haps_users;
  r.dropped_user_count = active - r.served_user_count() - haps_users;
  return r;
}

}  // namespace

TEST_CASE("proportion_served") {
  const std::vector<TimeSlotResult> all{slot({{10, 2}, {20, 3}}, 5), slot({{0, 0}, {5, 5}}, 5)};
  CHECK(proportion_served(all) == 1.0);
  const std::vector<TimeSlotResult> half{slot({{10, 1}}, 2), slot({{10, 1}}, 2)};
  CHECK(proportion_served(half) == 0.5);
  const std::vector<TimeSlotResult> with_haps{slot({{10, 1}}, 2, 5.0, 1, 2000.0)};
  CHECK(proportion_served(with_haps) == 1.0);
  CHECK_THROWS_AS(proportion_served(std::vector<TimeSlotResult>{}), UndefinedMetricError);
}

TEST_CASE("capacity_utilization") {
  const std::vector<TimeSlotResult> zero{slot({{0, 0}, {0, 0}}, 0)};
  CHECK(capacity_utilization(zero, 2000.0) == 0.0);
  const std::vector<TimeSlotResult> r{slot({{500, 3}, {300, 2}}, 5), slot({{1000, 4}, {0, 0}}, 4)};
  CHECK(capacity_utilization(r, 2000.0) == doctest::Approx((0.4 + 0.5) / 2));
  CHECK_THROWS_AS(capacity_utilization(r, 0.0), UndefinedMetricError);
}

TEST_CASE("capacity_utilization_switchoff") {
  SUBCASE("all sites busy equals plain utilization") {
    const std::vector<TimeSlotResult> r{slot({{500, 3}, {300, 2}}, 5), slot({{900, 4}, {100, 1}}, 5)};
    CHECK(capacity_utilization_switchoff(r) == doctest::Approx(capacity_utilization(r, 2000.0)));
  }
  SUBCASE("one serving site, the rest idle") {
    const std::vector<TimeSlotResult> r{slot({{400, 2}, {0, 0}, {0, 0}}, 2)};
    CHECK(capacity_utilization_switchoff(r) == doctest::Approx(0.4));
    CHECK(mean_active_capacity_mbps(r) == 1000.0);
  }
  SUBCASE("idle slot contributes 0") {
    const std::vector<TimeSlotResult> r{slot({{0, 0}}, 0), slot({{500, 1}}, 1)};
    CHECK(capacity_utilization_switchoff(r) == doctest::Approx(0.25));
  }
  SUBCASE("HAPS counts only when it serves") {
    const std::vector<TimeSlotResult> r{slot({{500, 1}}, 2, 100.0, 1, 2000.0), slot({{500, 1}}, 1, 0.0, 0, 2000.0)};
    CHECK(capacity_utilization_switchoff(r) == doctest::Approx((600.0 / 3000.0 + 0.5) / 2));
  }
  SUBCASE("never below plain utilization (property)") {
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> d(0, 1000);
    std::uniform_int_distribution<int> users(0, 3);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<TimeSlotResult> r;
      for (int t = 0; t < 5; ++t) {
        std::vector<std::pair<double, int>> loads;
        for (int s = 0; s < 4; ++s) {
          const int n = users(eng);
          loads.push_back({n > 0 ? d(eng) : 0.0, n});
        }
        r.push_back(slot(loads, 12));
      }
      const double u = capacity_utilization(r, 4000.0);
      CHECK(capacity_utilization_switchoff(r) >= u - 1e-12);
      CHECK(u <= 1.0);
    }
  }
}

TEST_CASE("network_power_kw") {
  CHECK(network_power_kw(0.0) == 0.0);
  CHECK(network_power_kw(85000.0) == doctest::Approx(314.5));
  CHECK(network_power_kw(38000.0) == doctest::Approx(140.6));
  CHECK(314.5 / 85.0 == doctest::Approx(3.7));
  CHECK(140.6 / 38.0 == doctest::Approx(3.7));
  CHECK(network_power_kw(1000.0, 5.0) == 5.0);
  for (const double a : {0.0, 1.5, 36000.0}) {
    for (const double b : {0.0, 2000.0, 49000.0}) {
      CHECK(network_power_kw(a + b) == doctest::Approx(network_power_kw(a) + network_power_kw(b)));
    }
  }
  CHECK_THROWS_AS(network_power_kw(-1.0), ConfigError);
}

TEST_CASE("metrics are invariant under user relabeling") {
  // Simulation results only carry per-site aggregates; relabeling users
  // permutes the rejected-point list but not any tally.
  TimeSlotResult r = slot({{500, 3}}, 5);
  r.rejected_points = {{{1, 1}, 10, 0, RejectReason::capacity, 7}, {{2, 2}, 20, 0, RejectReason::coverage, 9}};
  TimeSlotResult relabeled = r;
  std::swap(relabeled.rejected_points[0], relabeled.rejected_points[1]);
  relabeled.rejected_points[0].user_id = 1;
  relabeled.rejected_points[1].user_id = 2;
  const std::vector<TimeSlotResult> a{r}, b{relabeled};
  CHECK(proportion_served(a) == proportion_served(b));
  CHECK(capacity_utilization(a, 1000.0) == capacity_utilization(b, 1000.0));
}

TEST_CASE("summary writers") {
  const std::vector<TimeSlotResult> r{slot({{500, 3}, {0, 0}}, 4)};
  const auto m = summarize(r, 2000.0);
  CHECK(m.proportion_served == 0.75);
  CHECK(m.utilization == 0.25);
  CHECK(m.utilization_switchoff == 0.5);
  CHECK(m.power_kw == doctest::Approx(7.4));
  CHECK(m.power_switchoff_kw == doctest::Approx(3.7));
  CHECK(m.terrestrial_rejection == 0.25);
  CHECK(m.max_dropped_users == 1);

  std::ostringstream csv;
  write_summary_csv(csv, m);
  CHECK(csv.str() ==
        "proportion_served,utilization,utilization_switchoff,power_kw,power_switchoff_kw,total_capacity_mbps,"
        "terrestrial_rejection,max_dropped_users\n0.75,0.25,0.5,7.4,3.7,2000,0.25,1\n");
  std::ostringstream text;
  write_summary_text(text, "t", m);
  CHECK(text.str().find("Capacity Utilization") != std::string::npos);
  CHECK(text.str().find("Proportion of Users Served") != std::string::npos);
  CHECK(text.str().find("Network Power Consumption") != std::string::npos);

  std::ostringstream slots;
  write_slot_csv(slots, r);
  CHECK(slots.str().rfind("ts,site_id,served_demand,served_users,rejected_coverage_count,rejected_capacity_count,"
                          "haps_served_demand\n0,0,500,3,0,0,0\n",
                          0) == 0);
}
