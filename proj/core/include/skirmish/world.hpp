#pragma once

#include "skirmish/rng.hpp"
#include "skirmish/roster.hpp"
#include "skirmish/types.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace skirmish {

inline constexpr int kFixedShift = 8;
inline constexpr std::int32_t kFixedOne = 1 << kFixedShift;

/// 24.8 fixed-point position (1/256 pixel).
struct FixedPos {
  std::int32_t x = 0;
  std::int32_t y = 0;

  Position pixel() const noexcept { return {x >> kFixedShift, y >> kFixedShift}; }
  static constexpr FixedPos center_of(Position p) noexcept {
    return {p.x * kFixedOne + kFixedOne / 2, p.y * kFixedOne + kFixedOne / 2};
  }
  friend bool operator==(const FixedPos&, const FixedPos&) = default;
};

struct MoveTo {
  Position goal;
  friend bool operator==(const MoveTo&, const MoveTo&) = default;
};

struct AttackUnit {
  UnitId target = kNoTarget;
  friend bool operator==(const AttackUnit&, const AttackUnit&) = default;
};

using Order = std::variant<std::monostate, MoveTo, AttackUnit>;

struct SimUnit {
  UnitId id = 0;
  TypeId type = 0;
  PlayerId owner = 0;
  FixedPos pos;
  std::int32_t hp = 0;
  std::int32_t shield = 0;
  std::int32_t energy = 0;
  std::int32_t gwcd = 0;
  std::int32_t awcd = 0;
  Order order;

  Position pixel() const noexcept { return pos.pixel(); }
  bool idle() const noexcept { return std::holds_alternative<std::monostate>(order); }
  friend bool operator==(const SimUnit&, const SimUnit&) = default;
};

/// Final outcome of a match. `winner` is empty for a draw.
struct MatchOutcome {
  std::optional<PlayerId> winner;
  std::uint32_t final_frame = 0;
  friend bool operator==(const MatchOutcome&, const MatchOutcome&) = default;
};

/// Authoritative simulator state. `units` is kept sorted by id; dead units are removed.
struct World {
  std::uint32_t tick = 0;
  std::int32_t map_w = 512;
  std::int32_t map_h = 512;
  bool fog = false;
  std::uint32_t max_frames = 5000;
  RngState rng;
  Roster roster;
  std::vector<SimUnit> units;
  std::optional<MatchOutcome> result;

  const SimUnit* find(UnitId id) const noexcept;
  SimUnit* find(UnitId id) noexcept;
  bool in_bounds(Position p) const noexcept {
    return p.x >= 0 && p.y >= 0 && p.x < map_w && p.y < map_h;
  }
  std::size_t count_owned(PlayerId player) const noexcept;

  friend bool operator==(const World&, const World&) = default;
};

} // namespace skirmish
