#pragma once

// Closed-form HAPS feasibility figures: path-loss parity distance,
// nadir propagation latency and elevation-limited footprint radius.

namespace hapsim {

struct LinkBudgetParams {
  double haps_altitude_m = 20000.0;
  double haps_pathloss_exponent = 2.0;
  double terrestrial_pathloss_exponent = 4.0;
  double min_elevation_deg = 30.0;
  double propagation_speed_mps = 2.998e8;
};

/// Throws ConfigError. Altitude must be > 0, exponents >= 1, elevation in (0, 90).
void validate(const LinkBudgetParams& params);

/// Terrestrial distance d with d^n_terr == altitude^n_haps, i.e. equal
/// received power under pure distance-power-law loss.
double parity_distance_m(const LinkBudgetParams& params);

/// One-way vertical (nadir) delay in milliseconds. Altitude 0 gives 0.
double propagation_latency_ms(const LinkBudgetParams& params);

/// Ground radius visible above `min_elevation_deg`: altitude / tan(elevation).
double footprint_radius_m(const LinkBudgetParams& params);

}  // namespace hapsim
