#pragma once

#include <cstdint>
#include <random>

namespace adhocnet {

using RandomStream = std::mt19937_64;

// Every consumer of randomness gets its own stream. Purposes never share a
// stream, so changing how many draws one consumer makes cannot perturb another.
enum class StreamPurpose : std::uint64_t {
  kEpisode = 1,
  kPlacement = 2,
  kMobility = 3,
  kAgentExplore = 4,
  kAgentInit = 5,
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Seed for the stream keyed by (master_seed, purpose, index).
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, StreamPurpose purpose,
                                    std::uint64_t index) {
  std::uint64_t h = detail::splitmix64(master_seed);
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  h = detail::splitmix64(h ^ (index * 0xd1342543de82ef95ULL + 1));
  return h;
}

inline RandomStream derive_stream(std::uint64_t master_seed, StreamPurpose purpose,
                                  std::uint64_t index) {
  return RandomStream(derive_seed(master_seed, purpose, index));
}

// Uniform double in [0, 1) built from the top 53 bits; identical on every
// standard library, unlike std::uniform_real_distribution.
inline double uniform01(RandomStream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(RandomStream& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_index(RandomStream& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

}  // namespace adhocnet
