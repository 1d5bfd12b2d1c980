#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace hapsim {

/// One independent random stream per modelling concern, so that a change in
/// how many draws one concern consumes never shifts the others.
enum class Stream : std::size_t {
  positions = 0,
  waypoints,
  speeds,
  pauses,
  demands,
  admission,
  haps_admission,
  count_
};

class RngStreams {
 public:
  using Engine = std::mt19937_64;

  explicit RngStreams(std::uint64_t seed);

  Engine& operator[](Stream s) noexcept { return engines_[static_cast<std::size_t>(s)]; }

  std::uint64_t seed() const noexcept { return seed_; }

  /// Seed of a stream: splitmix64 mixing of (scenario seed, stream index).
  static std::uint64_t derive_seed(std::uint64_t seed, Stream s) noexcept;

 private:
  std::uint64_t seed_;
  std::array<Engine, static_cast<std::size_t>(Stream::count_)> engines_;
};

}  // namespace hapsim
