#pragma once

#include "skirmish/command.hpp"
#include "skirmish/roster.hpp"
#include "skirmish/types.hpp"

#include <optional>
#include <vector>

namespace skirmish {

/// Whether `attacker` carries a weapon for the target's class (air or ground).
/// Throws ConfigError if the target's type is not in the roster.
bool can_hit(const UnitState& attacker, const UnitState& target, const Roster& roster);

/// can_hit, and the target is within that weapon's range.
bool in_range(const UnitState& attacker, const UnitState& target, const Roster& roster);

/// Nearest unit of the opposing group (ties go to the lowest id); nullopt if there is none.
/// Throws std::out_of_range if `unit` is in neither group.
std::optional<UnitId> closest_enemy(const Frame& frame, UnitId unit);

/// Every own unit attacks the nearest visible enemy it can hit.
std::vector<Command> attack_closest(const Frame& frame, const Roster& roster);

/// Issues nothing.
inline std::vector<Command> idle_policy(const Frame&, const Roster&) { return {}; }

} // namespace skirmish
