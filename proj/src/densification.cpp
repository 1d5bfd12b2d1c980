#include "hapsim/densification.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>

#include "hapsim/csv.hpp"
#include "hapsim/errors.hpp"

namespace hapsim {

namespace {

// Uniform bucket grid over the points. Covered points are pruned from the
// buckets around each opened site so later scans only see uncovered ones.
class PointIndex {
 public:
  struct Entry {
    double x;
    double y;
    double demand;
    std::uint32_t index;
    std::uint32_t slot;
  };
  using Bucket = std::vector<Entry>;

  PointIndex(std::span<const DemandPoint> points, double cell, int ts_offset) : cell_(cell) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& p = points[i].position;
      const auto [bx, by] = bucket_of(p);
      buckets_[pack(bx, by)].push_back({p.x_m, p.y_m, points[i].demand_mbps, static_cast<std::uint32_t>(i),
                                        static_cast<std::uint32_t>(points[i].ts_index + ts_offset)});
    }
  }

  template <typename Fn>
  void for_each_within(const Position& c, double radius, Fn&& fn) const {
    const double r2 = radius * radius;
    for_each_bucket(c, radius, [&](const Bucket& bucket) {
      for (const auto& e : bucket) {
        const double ex = e.x - c.x_m;
        const double ey = e.y - c.y_m;
        const double d2 = ex * ex + ey * ey;
        if (d2 <= r2) fn(e, d2);
      }
    });
  }

  template <typename Pred>
  void prune(const Position& c, double radius, Pred&& is_covered) {
    for_each_bucket(c, radius, [&](Bucket& bucket) {
      std::erase_if(bucket, [&](const Entry& e) { return is_covered(e.index); });
    });
  }

 private:
  template <typename Fn>
  void for_each_bucket(const Position& c, double radius, Fn&& fn) const {
    const auto [x0, y0] = bucket_of({c.x_m - radius, c.y_m - radius});
    const auto [x1, y1] = bucket_of({c.x_m + radius, c.y_m + radius});
    for (std::int64_t bx = x0; bx <= x1; ++bx) {
      for (std::int64_t by = y0; by <= y1; ++by) {
        const auto it = buckets_.find(pack(bx, by));
        if (it != buckets_.end()) fn(it->second);
      }
    }
  }
  template <typename Fn>
  void for_each_bucket(const Position& c, double radius, Fn&& fn) {
    std::as_const(*this).for_each_bucket(c, radius, [&](const Bucket& bucket) { fn(const_cast<Bucket&>(bucket)); });
  }

  std::pair<std::int64_t, std::int64_t> bucket_of(const Position& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x_m / cell_)), static_cast<std::int64_t>(std::floor(p.y_m / cell_))};
  }
  static std::int64_t pack(std::int64_t bx, std::int64_t by) { return (bx << 32) ^ (by & 0xffffffff); }

  double cell_;
  std::unordered_map<std::int64_t, Bucket> buckets_;
};

struct Neighbor {
  std::uint32_t index;
  std::uint32_t slot;
  double demand;
  double d2;
};

int min_ts(std::span<const DemandPoint> points) {
  int m = 0;
  for (const auto& p : points) m = std::min(m, p.ts_index);
  return m;
}

class GreedyPlanner {
 public:
  GreedyPlanner(std::span<const DemandPoint> points, double radius, double capacity)
      : points_(points),
        radius_(radius),
        capacity_(capacity),
        ts_offset_(-min_ts(points)),
        index_(points, radius / 2.0, ts_offset_),
        covered_(points.size(), false) {
    int max_ts = 0;
    for (const auto& p : points) max_ts = std::max(max_ts, p.ts_index);
    slot_sum_.assign(static_cast<std::size_t>(max_ts + ts_offset_ + 1), 0.0);
    slot_mark_.assign(slot_sum_.size(), 0);
  }

  struct Gain {
    double demand = -1.0;
    std::size_t count = 0;

    bool better_than(const Gain& o) const {
      if (demand != o.demand) return demand > o.demand;
      return count > o.count;
    }
  };

  /// Points the site at `c` would take: everything within radius except in
  /// slots where the disc holds more than capacity; there nearest-first.
  std::vector<std::size_t> take(const Position& c, Gain* gain) {
    neighbors_.clear();
    index_.for_each_within(c, radius_, [&](const PointIndex::Entry& e, double d2) {
      if (!covered_[e.index]) neighbors_.push_back({e.index, e.slot, e.demand, d2});
    });
    touched_.clear();
    for (const auto& n : neighbors_) {
      if (!slot_mark_[n.slot]) {
        slot_mark_[n.slot] = 1;
        touched_.push_back(n.slot);
      }
      slot_sum_[n.slot] += n.demand;
    }
    std::vector<std::size_t> taken;
    // Slots whose disc demand fits are taken whole; only overfull slots need
    // the nearest-first packing.
    overfull_.clear();
    for (const auto& n : neighbors_) {
      if (slot_sum_[n.slot] <= capacity_) {
        taken.push_back(n.index);
      } else {
        overfull_.push_back(n);
      }
    }
    if (!overfull_.empty()) {
      std::sort(overfull_.begin(), overfull_.end(), [&](const Neighbor& a, const Neighbor& b) {
        if (a.slot != b.slot) return a.slot < b.slot;
        if (a.d2 != b.d2) return a.d2 < b.d2;
        return a.index < b.index;
      });
      std::uint32_t current = std::numeric_limits<std::uint32_t>::max();
      double residual = 0.0;
      for (const auto& n : overfull_) {
        if (n.slot != current) {
          current = n.slot;
          residual = capacity_;
        }
        const double d = n.demand;
        if (d <= residual) {
          residual -= d;
          taken.push_back(n.index);
        }
      }
    }
    for (const auto s : touched_) {
      slot_sum_[s] = 0.0;
      slot_mark_[s] = 0;
    }
    touched_.clear();
    if (gain != nullptr) {
      gain->demand = 0.0;
      for (const auto i : taken) gain->demand += points_[i].demand_mbps;
      gain->count = taken.size();
    }
    return taken;
  }

  bool covered(std::size_t i) const { return covered_[i]; }
  void cover(std::size_t i) { covered_[i] = true; }
  void prune_around(const Position& c) {
    index_.prune(c, radius_, [&](std::size_t i) { return static_cast<bool>(covered_[i]); });
  }

 private:

  std::span<const DemandPoint> points_;
  double radius_;
  double capacity_;
  int ts_offset_ = 0;
  PointIndex index_;
  std::vector<bool> covered_;
  std::vector<double> slot_sum_;
  std::vector<char> slot_mark_;
  std::vector<std::size_t> touched_;
  std::vector<Neighbor> neighbors_;
  std::vector<Neighbor> overfull_;
};

}  // namespace

DensificationPlan plan_sites(std::span<const DemandPoint> points, double radius_m, double capacity_mbps,
                             const PlannerOptions& options) {
  if (!(radius_m > 0.0)) throw ConfigError("plan_sites: radius must be > 0");
  if (!(capacity_mbps > 0.0)) throw ConfigError("plan_sites: capacity must be > 0");
  std::vector<std::size_t> offenders;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].demand_mbps > capacity_mbps) offenders.push_back(i);
  }
  if (!offenders.empty()) {
    std::string msg = "plan_sites: " + std::to_string(offenders.size()) + " point(s) exceed site capacity:";
    for (std::size_t k = 0; k < std::min<std::size_t>(offenders.size(), 10); ++k) {
      msg += " #" + std::to_string(offenders[k]);
    }
    throw InfeasiblePointError(msg, std::move(offenders));
  }

  DensificationPlan plan;
  plan.input_point_count = points.size();
  plan.assignment.assign(points.size(), -1);
  if (points.empty()) return plan;

  GreedyPlanner planner(points, radius_m, capacity_mbps);
  const std::size_t max_candidates = std::max<std::size_t>(options.max_candidates, 1);
  std::size_t remaining = points.size();

  // Cached gains of the current candidate pool. Opening a site only changes
  // the coverage state inside its disc, so only candidates within 2r of it
  // need their gain recomputed.
  std::vector<std::size_t> pool;
  std::vector<GreedyPlanner::Gain> gains;
  const auto refill_pool = [&] {
    pool.clear();
    const std::size_t stride = (remaining + max_candidates - 1) / max_candidates;
    std::size_t seen = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (planner.covered(i)) continue;
      if (seen++ % stride == 0) pool.push_back(i);
    }
    gains.assign(pool.size(), {});
    for (std::size_t k = 0; k < pool.size(); ++k) planner.take(points[pool[k]].position, &gains[k]);
  };
  refill_pool();

  while (remaining > 0) {
    if (pool.empty()) refill_pool();
    std::size_t best = 0;
    for (std::size_t k = 1; k < pool.size(); ++k) {
      if (gains[k].better_than(gains[best])) best = k;
    }
    const Position site_pos = points[pool[best]].position;
    const int site_index = static_cast<int>(plan.new_sites.size());
    for (const auto i : planner.take(site_pos, nullptr)) {
      planner.cover(i);
      plan.assignment[i] = site_index;
      --remaining;
    }
    planner.prune_around(site_pos);
    plan.new_sites.push_back(CellSite{.id = options.first_site_id + site_index,
                                      .position = site_pos,
                                      .kind = SiteKind::terrestrial_added,
                                      .coverage_radius_m = radius_m,
                                      .capacity_mbps = capacity_mbps});

    std::vector<std::size_t> next_pool;
    std::vector<GreedyPlanner::Gain> next_gains;
    const double reach = 2.0 * radius_m;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (planner.covered(pool[k])) continue;
      next_pool.push_back(pool[k]);
      next_gains.push_back(gains[k]);
      if (distance(points[pool[k]].position, site_pos) <= reach) {
        planner.take(points[pool[k]].position, &next_gains.back());
      }
    }
    pool = std::move(next_pool);
    gains = std::move(next_gains);
  }
  plan.covered_point_count = points.size();
  return plan;
}

bool plan_is_feasible(const DensificationPlan& plan, std::span<const DemandPoint> points) {
  if (plan.assignment.size() != points.size()) return false;
  std::unordered_map<std::int64_t, double> load;  // (site, ts) -> demand
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int s = plan.assignment[i];
    if (s < 0 || static_cast<std::size_t>(s) >= plan.new_sites.size()) return false;
    const auto& site = plan.new_sites[static_cast<std::size_t>(s)];
    if (distance(site.position, points[i].position) > site.coverage_radius_m) return false;
    const std::int64_t key = (static_cast<std::int64_t>(s) << 32) | static_cast<std::uint32_t>(points[i].ts_index);
    double& l = load[key];
    l += points[i].demand_mbps;
    if (l > site.capacity_mbps) return false;
  }
  return true;
}

void write_plan_csv(std::ostream& os, std::span<const CellSite> sites) {
  CsvWriter csv(os);
  csv.row("site_id", "x", "y", "capacity");
  for (const auto& s : sites) csv.row(s.id, s.position.x_m, s.position.y_m, s.capacity_mbps);
}

std::vector<CellSite> read_plan_csv(std::istream& is, double radius_m) {
  std::vector<CellSite> sites;
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("plan csv: empty input");
  if (split_csv_line(line) != std::vector<std::string>{"site_id", "x", "y", "capacity"}) {
    throw ConfigError("plan csv: unexpected header '" + line + "'");
  }
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    CellSite s;
    s.kind = SiteKind::terrestrial_added;
    s.coverage_radius_m = radius_m;
    if (f.size() != 4 || !parse_number(f[0], s.id) || !parse_number(f[1], s.position.x_m) ||
        !parse_number(f[2], s.position.y_m) || !parse_number(f[3], s.capacity_mbps)) {
      throw ConfigError("plan csv: malformed line " + std::to_string(lineno));
    }
    sites.push_back(s);
  }
  return sites;
}

std::vector<DemandPoint> read_rejected_csv(std::istream& is) {
  std::vector<DemandPoint> points;
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("rejected csv: empty input");
  if (split_csv_line(line) != std::vector<std::string>{"ts", "x", "y", "demand", "reason", "user_id"}) {
    throw ConfigError("rejected csv: unexpected header '" + line + "'");
  }
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    DemandPoint p;
    bool ok = f.size() == 6 && parse_number(f[0], p.ts_index) && parse_number(f[1], p.position.x_m) &&
              parse_number(f[2], p.position.y_m) && parse_number(f[3], p.demand_mbps) &&
              parse_number(f[5], p.user_id);
    if (ok && f[4] == "coverage") {
      p.reason = RejectReason::coverage;
    } else if (ok && f[4] == "capacity") {
      p.reason = RejectReason::capacity;
    } else {
      ok = false;
    }
    if (!ok) throw ConfigError("rejected csv: malformed line " + std::to_string(lineno));
    points.push_back(p);
  }
  return points;
}

}  // namespace hapsim
