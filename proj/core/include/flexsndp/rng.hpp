#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace flexsndp {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives the seed of a named sub-stream, e.g. substream_seed(seed, "embed")
// or substream_seed(seed, "round", i, j). All randomness in a run flows from
// one 64-bit seed through these names.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::string_view name,
                                       std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the name
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return mix64(mix64(mix64(seed ^ h) + a) + b);
}

inline Rng make_rng(std::uint64_t seed, std::string_view name,
                    std::uint64_t a = 0, std::uint64_t b = 0) {
  return Rng(substream_seed(seed, name, a, b));
}

// Uniform double in [0,1) that does not depend on the standard library's
// distribution implementation.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace flexsndp
