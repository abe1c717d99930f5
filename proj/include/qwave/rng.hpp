#pragma once

#include <cstdint>
#include <random>

namespace qwave {

// Stateless splitmix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed for stream k derived from a master seed. Stream k depends only on
// (master, k), so growing the ensemble never perturbs earlier streams.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t k) {
  return splitmix64(master + (k + 1) * 0x9E3779B97F4A7C15ULL);
}

inline std::mt19937_64 stream_rng(std::uint64_t master, std::uint64_t k) {
  return std::mt19937_64(stream_seed(master, k));
}

} // namespace qwave
