#pragma once

#include "skirmish/roster.hpp"
#include "skirmish/types.hpp"

#include <string>
#include <vector>

namespace skirmish {

/// Checks every observable-state invariant of `frame` against the map bounds and roster.
/// Each entry names the offending unit and field, e.g. "unit 3: x out of bounds".
/// Unknown type ids are reported, never thrown.
std::vector<std::string> validate_frame(const Frame& frame, std::int32_t map_w, std::int32_t map_h,
                                        const Roster& roster);

} // namespace skirmish
