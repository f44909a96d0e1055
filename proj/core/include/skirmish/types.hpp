#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace skirmish {

using UnitId = std::int32_t;
using TypeId = std::int32_t;
using PlayerId = std::int32_t;

inline constexpr UnitId kNoTarget = -1;
inline constexpr int kPlayerCount = 2;

/// Pixel coordinates.
struct Position {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend bool operator==(const Position&, const Position&) = default;
};

inline constexpr std::int64_t squared_distance(Position a, Position b) noexcept {
  const std::int64_t dx = std::int64_t{a.x} - b.x;
  const std::int64_t dy = std::int64_t{a.y} - b.y;
  return dx * dx + dy * dy;
}

/// One unit as a player observes it.
struct UnitState {
  UnitId id = 0;
  TypeId type = 0;
  Position position;
  std::int32_t hp = 0;
  std::int32_t shield = 0;
  std::int32_t energy = 0;
  std::int32_t armor = 0;
  std::int32_t size = 1;
  std::int32_t gwtype = 0;
  std::int32_t awtype = 0;
  std::int32_t gwcd = 0;
  std::int32_t awcd = 0;
  std::int32_t gwattack = 0;
  std::int32_t awattack = 0;
  std::int32_t gwrange = 0;
  std::int32_t awrange = 0;
  bool idle = true;
  UnitId target = kNoTarget;
  Position targetpos;
  bool enemy = false;

  friend bool operator==(const UnitState&, const UnitState&) = default;
};

using UnitMap = std::map<UnitId, UnitState>;

/// Per-player observation at one tick. Maps are ordered by id, which is also wire order.
struct Frame {
  std::uint32_t frame_number = 0;
  UnitMap units_myself;
  UnitMap units_enemy;

  friend bool operator==(const Frame&, const Frame&) = default;
};

} // namespace skirmish
