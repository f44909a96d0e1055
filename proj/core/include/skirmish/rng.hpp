#pragma once

#include <cstdint>

namespace skirmish {

/// 64-bit LCG (Knuth MMIX constants). Every value it returns is the new state.
struct RngState {
  std::uint64_t s = 0;
  friend bool operator==(const RngState&, const RngState&) = default;
};

inline constexpr std::uint64_t kRngMultiplier = 6364136223846793005ULL;
inline constexpr std::uint64_t kRngIncrement = 1442695040888963407ULL;

constexpr std::uint64_t rng_next(RngState& rng) noexcept {
  rng.s = rng.s * kRngMultiplier + kRngIncrement;
  return rng.s;
}

} // namespace skirmish
