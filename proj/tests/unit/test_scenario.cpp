#include <doctest.h>

#include <cmath>
#include <random>

#include "hapsim/errors.hpp"
#include "hapsim/scenario.hpp"

using namespace hapsim;

TEST_CASE("default scenario matches the urban case study") {
  const Scenario s;
  CHECK(s.area_width_m == 8000.0);
  CHECK(s.area_height_m == 8000.0);
  CHECK(s.bs_rows * s.bs_cols == 36);
  CHECK(s.bs_coverage_radius_m == 700.0);
  CHECK(s.bs_capacity_mbps == 1000.0);
  CHECK(s.num_ts == 1440);
  CHECK(s.ts_duration_s == 60.0);
  CHECK(s.demand_sigma_mbps == 20.0);
  CHECK(s.num_users == 14000);
  CHECK_NOTHROW(validate(s));
}

TEST_CASE("scenario validation") {
  Scenario s;
  s.active_user_count = s.num_users + 1;
  CHECK_THROWS_AS(validate(s), ConfigError);
  s = {};
  s.num_ts = 0;
  CHECK_THROWS_AS(validate(s), ConfigError);
  s = {};
  s.area_width_m = 0.0;
  CHECK_THROWS_AS(validate(s), ConfigError);
  s = {};
  s.bs_capacity_mbps = -1.0;
  CHECK_THROWS_AS(validate(s), ConfigError);
  s = {};
  s.mobility.speed_min_mps = 3.0;
  CHECK_THROWS_AS(validate(s), ConfigError);
  s = {};
  s.mobility.pause_prob = 1.5;
  CHECK_THROWS_AS(validate(s), ConfigError);
}

TEST_CASE("place_initial_grid") {
  SUBCASE("6x6 on 8 km square") {
    const auto sites = place_initial_grid(Scenario{});
    REQUIRE(sites.size() == 36);
    CHECK(sites[0].position.x_m == doctest::Approx(666.6667).epsilon(1e-6));
    CHECK(sites[0].position.y_m == doctest::Approx(666.6667).epsilon(1e-6));
    CHECK(sites[1].position.x_m - sites[0].position.x_m == doctest::Approx(1333.3333).epsilon(1e-6));
    CHECK(sites[6].position.y_m - sites[0].position.y_m == doctest::Approx(1333.3333).epsilon(1e-6));
    CHECK(total_capacity_mbps(sites) == 36000.0);
    for (std::size_t i = 0; i < sites.size(); ++i) {
      CHECK(sites[i].id == static_cast<int>(i));
      CHECK(sites[i].kind == SiteKind::terrestrial_initial);
      CHECK(sites[i].coverage_radius_m == 700.0);
    }
  }
  SUBCASE("1x1 on 100 m square") {
    Scenario s;
    s.area_width_m = s.area_height_m = 100.0;
    s.bs_rows = s.bs_cols = 1;
    const auto sites = place_initial_grid(s);
    REQUIRE(sites.size() == 1);
    CHECK(sites[0].position == Position{50.0, 50.0});
  }
  SUBCASE("independent of seed") {
    Scenario a, b;
    b.seed = 999;
    const auto sa = place_initial_grid(a);
    const auto sb = place_initial_grid(b);
    for (std::size_t i = 0; i < sa.size(); ++i) CHECK(sa[i].position == sb[i].position);
  }
  SUBCASE("nonpositive dimensions") {
    Scenario s;
    s.area_height_m = -1.0;
    CHECK_THROWS_AS(place_initial_grid(s), ConfigError);
    s = {};
    s.bs_cols = 0;
    CHECK_THROWS_AS(place_initial_grid(s), ConfigError);
  }
}

TEST_CASE("in_coverage") {
  const CellSite site{.id = 0, .position = {0, 0}, .coverage_radius_m = 700.0, .capacity_mbps = 1000.0};
  CHECK(in_coverage(site, {0, 700}));
  CHECK_FALSE(in_coverage(site, {495, 495}));  // 700.04 m
  CHECK(in_coverage(site, {494, 494}));         // 698.6 m

  const auto haps = make_haps_site(Scenario{}, 99);
  CHECK(haps.kind == SiteKind::haps);
  CHECK(in_coverage(haps, {0, 0}));
  CHECK(in_coverage(haps, {8000, 8000}));
  CHECK(haps.coverage_radius_m == doctest::Approx(34641.016));

  SUBCASE("translation invariant") {
    std::mt19937_64 eng(3);
    std::uniform_real_distribution<double> u(-2000, 2000);
    for (int k = 0; k < 1000; ++k) {
      const Position p{u(eng), u(eng)};
      const double tx = u(eng), ty = u(eng);
      CellSite moved = site;
      moved.position = {tx, ty};
      CHECK(in_coverage(site, p) == in_coverage(moved, {p.x_m + tx, p.y_m + ty}));
    }
  }
}

TEST_CASE("nearest_site") {
  std::vector<CellSite> two{{.id = 0, .position = {0, 0}}, {.id = 1, .position = {10, 0}}};
  CHECK(nearest_site(two, {3, 0}).id == 0);

  std::vector<CellSite> tie{{.id = 5, .position = {10, 0}}, {.id = 4, .position = {0, 0}}};
  CHECK(nearest_site(tie, {5, 0}).id == 4);

  const auto grid = place_initial_grid(Scenario{});
  CHECK(nearest_site(grid, {666.67, 666.67}).id == 0);

  std::vector<CellSite> with_haps = grid;
  with_haps.push_back(make_haps_site(Scenario{}, 36));
  CHECK(nearest_site(with_haps, {4000, 4000}).kind != SiteKind::haps);

  std::vector<CellSite> only_haps{make_haps_site(Scenario{}, 0)};
  CHECK_THROWS_AS(nearest_site(only_haps, {0, 0}), ConfigError);
  CHECK_THROWS_AS(nearest_site(std::span<const CellSite>{}, {0, 0}), ConfigError);
}

TEST_CASE("nearest_site: no terrestrial site strictly closer (property)") {
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> u(0, 8000);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CellSite> sites;
    const int n = 1 + trial % 9;
    for (int i = 0; i < n; ++i) sites.push_back({.id = n - i, .position = {u(eng), u(eng)}});
    for (int k = 0; k < 100; ++k) {
      const Position p{u(eng), u(eng)};
      const auto& best = nearest_site(sites, p);
      for (const auto& s : sites) CHECK(distance(s.position, p) >= distance(best.position, p));
    }
  }
}

TEST_CASE("SiteLocator agrees with nearest_site") {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(0, 8000);
  auto check_all = [&](const std::vector<CellSite>& sites, int queries) {
    const SiteLocator locator(sites);
    for (int k = 0; k < queries; ++k) {
      const Position p{u(eng), u(eng)};
      REQUIRE(locator.nearest(p).id == nearest_site(sites, p).id);
    }
  };
  check_all(place_initial_grid(Scenario{}), 20000);

  // Ties on grid lines and at the area corners.
  const auto grid = place_initial_grid(Scenario{});
  const SiteLocator locator(grid);
  for (double x = 0; x <= 8000; x += 1000.0 / 3.0) {
    for (double y = 0; y <= 8000; y += 1000.0 / 3.0) {
      CHECK(locator.nearest({x, y}).id == nearest_site(grid, {x, y}).id);
    }
  }

  for (int trial = 0; trial < 40; ++trial) {
    std::vector<CellSite> sites;
    const int n = 1 + trial * 4;
    for (int i = 0; i < n; ++i) sites.push_back({.id = i, .position = {u(eng), u(eng)}});
    if (trial % 3 == 0) sites.push_back({.id = n, .position = {4000, 4000}, .kind = SiteKind::haps});
    check_all(sites, 500);
  }
}
