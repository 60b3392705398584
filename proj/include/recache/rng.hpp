#pragma once

#include <cstdint>
#include <random>

namespace recache {

using Rng = std::mt19937_64;

// splitmix64 finalizer, used to derive substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Keyed substream seed: fold each tag into the master seed with one splitmix
// round. Streams with distinct tag tuples are decorrelated, which is what the
// common-random-number discipline relies on (matching tags -> matching draws,
// independent of how many draws other components consumed).
template <typename... Tags>
std::uint64_t substream(std::uint64_t seed, Tags... tags) {
  std::uint64_t h = splitmix64(seed);
  ((h = splitmix64(h ^ static_cast<std::uint64_t>(tags))), ...);
  return h;
}

template <typename... Tags>
Rng substream_rng(std::uint64_t seed, Tags... tags) {
  return Rng{substream(seed, tags...)};
}

}  // namespace recache
