#pragma once

#include "skirmish/roster.hpp"
#include "skirmish/types.hpp"

#include <span>
#include <vector>

namespace skirmish {

/// The minimum a visibility query needs to know about a unit.
struct PlacedUnit {
  UnitId id = 0;
  TypeId type = 0;
  PlayerId owner = 0;
  Position position;
};

/// Ids (ascending) of opposing units the observer can see. With fog disabled every
/// opposing unit is visible; with fog, a unit is visible when some observer-owned unit
/// has it within its sight range (squared pixel distance <= sight^2).
///
/// Observer units are bucketed into a uniform grid whose cell edge is the roster's
/// largest sight range, so each candidate only tests the 3x3 cells around it.
std::vector<UnitId> visible_enemies(std::span<const PlacedUnit> units, PlayerId observer,
                                    const Roster& roster, bool fog);

} // namespace skirmish
