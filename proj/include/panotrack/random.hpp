#pragma once

// Counter-based random numbers (Philox4x32-10). Every draw is a pure function
// of (seed, index, stream), so draws for different frames or axes can be
// produced in any order, or in parallel, with identical results.

#include <array>
#include <cstdint>

namespace panotrack {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// One Philox4x32 block with 10 rounds.
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

class KeyedRng {
public:
  explicit KeyedRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Raw 128-bit block for (index, stream).
  PhiloxCounter block(std::uint64_t index, std::uint64_t stream) const;

  /// Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t index, std::uint64_t stream) const;
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi, std::uint64_t index, std::uint64_t stream) const;
  /// Uniform integer in [lo, hi] (inclusive). Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi, std::uint64_t index,
                           std::uint64_t stream) const;
  /// Standard normal via Box-Muller on one block.
  double normal(std::uint64_t index, std::uint64_t stream) const;

  /// Independent child seed, e.g. one per dataset sample.
  std::uint64_t derive(std::uint64_t index, std::uint64_t stream) const;

private:
  std::uint64_t seed_;
};

}  // namespace panotrack
