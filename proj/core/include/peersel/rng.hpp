#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "peersel/rational.hpp"

namespace peersel {

/// 64-bit seed for every randomized operation. Identical seed + identical
/// inputs must give identical outputs, on every platform.
struct Seed {
  std::uint64_t value = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Order-sensitive combiner for deriving sub-seeds (trials, mechanisms,
/// per-agent streams). Part of the reproducibility contract: changing it
/// changes every "same seed" golden output.
std::uint64_t seed_combine(std::uint64_t seed, std::uint64_t value);
std::uint64_t seed_combine(std::uint64_t seed, std::string_view tag);

// xoshiro256** (Blackman/Vigna, public domain), seeded through splitmix64.
// Chosen over std::mt19937_64 because we also need bounded draws with a
// distribution the standard leaves implementation-defined.
class Rng {
 public:
  explicit Rng(Seed seed);

  std::uint64_t next();

  /// Uniform integer in [0, bound), bound > 0. Rejection sampling, exact.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform big integer in [0, bound), bound > 0. Exact.
  Int below(const Int& bound);

  /// Fisher-Yates with this engine's bounded draws.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(static_cast<std::uint64_t>(i)));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_[4];
};

/// Draws an index proportionally to nonnegative integer weights.
/// Total weight must be positive.
std::size_t weighted_pick(const std::vector<Int>& weights, Rng& rng);

/// Scales rational weights to a common denominator and draws exactly.
std::size_t weighted_pick(const std::vector<Rat>& weights, Rng& rng);

}  // namespace peersel
