#include "hapsim/link_budget.hpp"

#include <cmath>
#include <numbers>

#include "hapsim/errors.hpp"

namespace hapsim {

namespace {

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

void validate(const LinkBudgetParams& params) {
  if (!(params.haps_altitude_m > 0.0)) throw ConfigError("link budget: altitude must be > 0");
  if (!(params.haps_pathloss_exponent >= 1.0) || !(params.terrestrial_pathloss_exponent >= 1.0)) {
    throw ConfigError("link budget: path-loss exponents must be >= 1");
  }
  if (!(params.min_elevation_deg > 0.0 && params.min_elevation_deg < 90.0)) {
    throw ConfigError("link budget: elevation must lie in (0, 90) degrees");
  }
  if (!(params.propagation_speed_mps > 0.0)) throw ConfigError("link budget: propagation speed must be > 0");
}

double parity_distance_m(const LinkBudgetParams& params) {
  validate(params);
  return std::pow(params.haps_altitude_m,
                  params.haps_pathloss_exponent / params.terrestrial_pathloss_exponent);
}

double propagation_latency_ms(const LinkBudgetParams& params) {
  // Altitude 0 is a meaningful limit here even though validate() rejects it.
  if (params.haps_altitude_m < 0.0) throw ConfigError("link budget: altitude must be >= 0");
  if (!(params.propagation_speed_mps > 0.0)) throw ConfigError("link budget: propagation speed must be > 0");
  return params.haps_altitude_m / params.propagation_speed_mps * 1e3;
}

double footprint_radius_m(const LinkBudgetParams& params) {
  validate(params);
  return params.haps_altitude_m / std::tan(deg_to_rad(params.min_elevation_deg));
}

}  // namespace hapsim
