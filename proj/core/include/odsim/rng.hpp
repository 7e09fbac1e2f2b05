#pragma once

#include <cstdint>
#include <random>

namespace odsim {

using Rng = std::mt19937_64;

/// Purposes of the independent random streams derived from a master seed.
enum class Stream : std::uint64_t {
  Trace = 1,
  InfoUpdate = 2,
  Broadcast = 3,
  RoiTable = 4,
  RoiChoice = 5,
  Phase = 6,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for stream `purpose`, sub-stream `index` (typically a node id).
std::uint64_t derive_seed(std::uint64_t master, Stream purpose, std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t master, Stream purpose, std::uint64_t index = 0) {
  return Rng(derive_seed(master, purpose, index));
}

/// Uniform real in [lo, hi).
inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Uniform integer in [lo, hi].
template <typename Int>
Int uniform_int(Rng& rng, Int lo, Int hi) {
  return std::uniform_int_distribution<Int>(lo, hi)(rng);
}

}  // namespace odsim
