#include "hapsim/rng.hpp"

namespace hapsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t RngStreams::derive_seed(std::uint64_t seed, Stream s) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(0x5eed0000ULL + static_cast<std::uint64_t>(s)));
}

RngStreams::RngStreams(std::uint64_t seed) : seed_(seed) {
  for (std::size_t i = 0; i < engines_.size(); ++i) {
    engines_[i].seed(derive_seed(seed, static_cast<Stream>(i)));
  }
}

}  // namespace hapsim
