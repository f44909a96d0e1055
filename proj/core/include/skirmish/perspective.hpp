#pragma once

#include "skirmish/frame.hpp"
#include "skirmish/visibility.hpp"
#include "skirmish/world.hpp"

#include <vector>

namespace skirmish {

/// Observable record of a simulated unit.
UnitState observe_unit(const SimUnit& unit, const Roster& roster, bool enemy);

std::vector<PlacedUnit> placed_units(const World& world);

/// Observation for `player`: own units plus whichever opposing units are visible.
/// Throws std::invalid_argument for players other than 0 and 1.
Frame build_player_frame(const World& world, PlayerId player, bool fog);
inline Frame build_player_frame(const World& world, PlayerId player) {
  return build_player_frame(world, player, world.fog);
}

} // namespace skirmish
