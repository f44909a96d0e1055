#pragma once

#include "skirmish/types.hpp"

#include <variant>

namespace skirmish {

struct Stop {
  UnitId unit = 0;
  friend bool operator==(const Stop&, const Stop&) = default;
};

struct Move {
  UnitId unit = 0;
  std::int32_t x = 0;
  std::int32_t y = 0;
  friend bool operator==(const Move&, const Move&) = default;
};

struct Attack {
  UnitId unit = 0;
  UnitId target = 0;
  friend bool operator==(const Attack&, const Attack&) = default;
};

using Command = std::variant<Stop, Move, Attack>;

inline UnitId acting_unit(const Command& cmd) noexcept {
  return std::visit([](const auto& c) { return c.unit; }, cmd);
}

} // namespace skirmish
