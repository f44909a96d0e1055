#include "skirmish/visibility.hpp"

#include <algorithm>
#include <unordered_map>

namespace skirmish {

namespace {

struct CellKey {
  std::int64_t cx;
  std::int64_t cy;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    return static_cast<std::size_t>(k.cx * 0x9E3779B97F4A7C15ULL) ^
           static_cast<std::size_t>(k.cy * 0xC2B2AE3D27D4EB4FULL);
  }
};

std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
  const std::int64_t q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

} // namespace

std::vector<UnitId> visible_enemies(std::span<const PlacedUnit> units, PlayerId observer,
                                    const Roster& roster, bool fog) {
  std::vector<UnitId> out;
  if (!fog) {
    for (const auto& u : units) {
      if (u.owner != observer) out.push_back(u.id);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  const std::int64_t cell = std::max<std::int64_t>(1, roster.max_sight_range());
  struct Eye {
    Position pos;
    std::int64_t sight_sq;
  };
  std::unordered_map<CellKey, std::vector<Eye>, CellHash> grid;
  for (const auto& u : units) {
    if (u.owner != observer) continue;
    const auto* spec = roster.find(u.type);
    if (spec == nullptr) continue;
    const std::int64_t s = spec->sight_range;
    grid[{floor_div(u.position.x, cell), floor_div(u.position.y, cell)}].push_back(
        {u.position, s * s});
  }
  if (grid.empty()) return out;

  for (const auto& u : units) {
    if (u.owner == observer) continue;
    const std::int64_t cx = floor_div(u.position.x, cell);
    const std::int64_t cy = floor_div(u.position.y, cell);
    bool seen = false;
    for (std::int64_t dx = -1; dx <= 1 && !seen; ++dx) {
      for (std::int64_t dy = -1; dy <= 1 && !seen; ++dy) {
        auto it = grid.find({cx + dx, cy + dy});
        if (it == grid.end()) continue;
        for (const auto& eye : it->second) {
          if (squared_distance(eye.pos, u.position) <= eye.sight_sq) {
            seen = true;
            break;
          }
        }
      }
    }
    if (seen) out.push_back(u.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace skirmish
