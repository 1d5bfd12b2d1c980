#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hapsim/errors.hpp"
#include "hapsim/experiment.hpp"

using namespace hapsim;

namespace {

Scenario light(int users, int slots) {
  Scenario s;
  s.active_user_count = users;
  s.num_ts = slots;
  return s;
}

SweepRecord rec(double mean, double served, double util) {
  return {mean, "x", served, util, util, 0.0};
}

}  // namespace

TEST_CASE("calibrate_load boundaries") {
  SUBCASE("target 0 stops at one user") {
    const auto r = calibrate_load(light(100, 10), {.target_utilization = 0.0, .slots = 10});
    CHECK(r.active_user_count == 1);
    CHECK(r.below_minimum);
  }
  SUBCASE("unreachable target reports the bracket") {
    Scenario s = light(5, 10);
    s.num_users = 10;
    try {
      calibrate_load(s, {.target_utilization = 0.5, .slots = 10});
      FAIL("expected CalibrationError");
    } catch (const CalibrationError& e) {
      CHECK(e.lower_bracket() == 1);
      CHECK(e.upper_bracket() == 10);
    }
  }
  SUBCASE("bad target") {
    CHECK_THROWS_AS(calibrate_load(light(5, 5), {.target_utilization = 1.5}), ConfigError);
  }
}

TEST_CASE("doubling cell capacity halves utilization at a fixed light load") {
  Scenario s = light(300, 40);
  const auto base = evaluate_sites(s, place_initial_grid(s));
  s.bs_capacity_mbps *= 2.0;
  const auto doubled = evaluate_sites(s, place_initial_grid(s));
  CHECK(doubled.utilization == doctest::Approx(base.utilization / 2.0).epsilon(1e-12));
  CHECK(doubled.proportion_served == base.proportion_served);
}

TEST_CASE("calibration constant is reproducible") {
  const auto r = calibrate_load(Scenario{});
  CHECK(r.within_tolerance);
  CHECK(std::abs(r.achieved_utilization - 0.73) <= 0.01);
  CHECK(r.active_user_count == kCalibratedActiveUsers);
  CHECK(r.hi - r.lo == 1);
}

TEST_CASE("densify and evaluate_plan") {
  Scenario s = light(2400, 60);
  const auto initial = place_initial_grid(s);
  SUBCASE("empty plan reproduces the baseline") {
    const auto a = evaluate_plan(s, initial, {});
    const auto b = evaluate_sites(s, initial);
    CHECK(a.utilization == b.utilization);
    CHECK(a.proportion_served == b.proportion_served);
    CHECK(a.total_capacity_mbps == 36000.0);
  }
  SUBCASE("replay on the generating seed serves everyone") {
    const auto outcome = densify(s, initial);
    CHECK(outcome.fully_served);
    CHECK(outcome.rounds >= 1);
    CHECK(outcome.baseline_rejected_points > 0);
    for (std::size_t i = 0; i < outcome.added_sites.size(); ++i) {
      CHECK(outcome.added_sites[i].id == 36 + static_cast<int>(i));
      CHECK(contains(s, outcome.added_sites[i].position));
    }
    const auto m = evaluate_plan(s, initial, outcome.added_sites);
    CHECK(m.proportion_served == 1.0);
    CHECK(m.total_capacity_mbps == 1000.0 * (36 + outcome.added_sites.size()));
    CHECK(m.power_kw == doctest::Approx(3.7 * (36 + outcome.added_sites.size())));
  }
}

TEST_CASE("run_table1 on a short trace") {
  const auto r = run_table1(light(2400, 40));
  CHECK(r.haps.total_capacity_mbps == 38000.0);
  CHECK(r.haps.power_kw == doctest::Approx(140.6));
  CHECK(r.baseline.total_capacity_mbps == 36000.0);
  CHECK(r.densified.proportion_served == 1.0);
  CHECK(r.densified.utilization < r.baseline.utilization);
  CHECK(r.haps.proportion_served >= r.baseline.proportion_served);
  std::ostringstream text, csv;
  write_table1_text(text, r);
  write_table1_csv(csv, r);
  CHECK(text.str().find("HAPS-assisted Network") != std::string::npos);
  CHECK(csv.str().rfind("network,total_capacity_mbps", 0) == 0);
}

TEST_CASE("variants") {
  CHECK(parse_variant("baseline").kind == VariantKind::baseline);
  CHECK(parse_variant("densified").kind == VariantKind::densified);
  const auto h = parse_variant("haps:5000");
  CHECK(h.kind == VariantKind::haps);
  CHECK(h.haps_capacity_mbps == 5000.0);
  CHECK(h.label() == "haps(5000)");
  CHECK_THROWS_AS(parse_variant("haps:"), ConfigError);
  CHECK_THROWS_AS(parse_variant("haps:-3"), ConfigError);
  CHECK_THROWS_AS(parse_variant("satellite"), ConfigError);
}

TEST_CASE("run_sweep properties on a short trace") {
  const Scenario s = light(1800, 40);
  const std::vector<double> means{6, 12, 18, 30, 45};
  const std::vector<VariantSpec> variants{parse_variant("baseline"), parse_variant("haps:1000"),
                                          parse_variant("haps:4000")};
  const auto records = run_sweep(s, means, variants, {}, {.threads = 1});
  REQUIRE(records.size() == 15);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].variant == variants[i / means.size()].label());
    CHECK(records[i].mean_demand_mbps == means[i % means.size()]);
    CHECK(records[i].proportion_served >= 0.0);
    CHECK(records[i].proportion_served <= 1.0);
    CHECK(records[i].utilization <= records[i].utilization_switchoff + 1e-12);
  }
  for (std::size_t m = 0; m < means.size(); ++m) {
    CHECK(records[m + 10].proportion_served >= records[m + 5].proportion_served);
    CHECK(records[m + 5].proportion_served >= records[m].proportion_served);
  }
  for (const auto& v : variants) {
    const auto curve = select_variant(records, v.label());
    for (std::size_t i = 1; i < curve.size(); ++i) {
      CHECK(curve[i].proportion_served <= curve[i - 1].proportion_served + 0.005);
    }
  }

  const auto threaded = run_sweep(s, means, variants, {}, {.threads = 3});
  std::ostringstream a, b;
  write_sweep_csv(a, records);
  write_sweep_csv(b, threaded);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("mean_demand_mbps,variant,proportion_served,utilization,utilization_switchoff,power_kw\n", 0) ==
        0);

  const std::vector<double> descending{10, 5};
  CHECK_THROWS_AS(run_sweep(s, descending, variants, {}), ConfigError);
}

TEST_CASE("curve analysis helpers") {
  const std::vector<SweepRecord> curve{rec(10, 1.0, 0.3), rec(12, 1.0, 0.5), rec(14, 0.99, 0.8), rec(16, 0.9, 0.79),
                                       rec(18, 0.8, 0.77)};
  CHECK(critical_demand(curve) == 12.0);
  CHECK(is_two_phase(curve, 0.01));
  const std::vector<SweepRecord> rising{rec(10, 0.9, 0.3), rec(12, 0.8, 0.5), rec(14, 0.7, 0.8)};
  CHECK(std::isinf(critical_demand(rising)));
  CHECK_FALSE(is_two_phase(rising, 0.01));
  const std::vector<SweepRecord> bumpy{rec(10, 1, 0.3), rec(12, 1, 0.8), rec(14, 1, 0.6), rec(16, 1, 0.75),
                                       rec(18, 1, 0.5)};
  CHECK_FALSE(is_two_phase(bumpy, 0.01));
  CHECK(is_two_phase(bumpy, 0.2));
  CHECK(default_sweep_means().front() == 10.0);
  CHECK(default_sweep_means().back() == 42.0);
  CHECK(default_sweep_means().size() == 17);
}
