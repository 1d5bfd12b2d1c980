#pragma once

// Greedy capacitated covering of rejected demand points with added
// terrestrial sites.

#include <iosfwd>
#include <span>
#include <vector>

#include "hapsim/association.hpp"
#include "hapsim/scenario.hpp"

namespace hapsim {

struct DensificationPlan {
  std::vector<CellSite> new_sites;
  std::size_t input_point_count = 0;
  std::size_t covered_point_count = 0;
  /// For each input point, index into new_sites of the site it was assigned to.
  std::vector<int> assignment;
};

struct PlannerOptions {
  int first_site_id = 0;
  /// Upper bound on candidate positions evaluated at once. Inputs with more
  /// uncovered points use an evenly strided subset of them.
  std::size_t max_candidates = 1024;
};

/// Repeatedly opens a site at the uncovered point whose disc carries the most
/// per-slot-feasible uncovered demand; inside each slot points are packed
/// nearest-first up to `capacity_mbps`. Stops when every point is assigned.
/// Throws InfeasiblePointError for points with demand above capacity and
/// ConfigError for nonpositive radius or capacity.
DensificationPlan plan_sites(std::span<const DemandPoint> points, double radius_m, double capacity_mbps,
                             const PlannerOptions& options = {});

/// True when every point lies within radius of its assigned site and no
/// site's per-slot assigned demand exceeds its capacity.
bool plan_is_feasible(const DensificationPlan& plan, std::span<const DemandPoint> points);

/// CSV with columns site_id, x, y, capacity.
void write_plan_csv(std::ostream& os, std::span<const CellSite> sites);

/// Reads a plan CSV; sites get kind terrestrial_added and `radius_m`.
/// Throws ConfigError on malformed input.
std::vector<CellSite> read_plan_csv(std::istream& is, double radius_m);

/// Reads a rejected-demand log written by write_rejected_csv.
std::vector<DemandPoint> read_rejected_csv(std::istream& is);

}  // namespace hapsim
