#pragma once

#include "skirmish/roster.hpp"
#include "skirmish/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <variant>
#include <vector>

namespace skirmish {

struct Spawn {
  TypeId type = 0;
  PlayerId owner = 0;
  std::int32_t x = 0;
  std::int32_t y = 0;
  friend bool operator==(const Spawn&, const Spawn&) = default;
};

/// `count` units of `type` for player 0 at random positions in the left part of the map,
/// mirrored through the map center for player 1.
struct RandomMirror {
  std::int32_t count = 0;
  TypeId type = 0;
  friend bool operator==(const RandomMirror&, const RandomMirror&) = default;
};

using Scenario = std::variant<std::vector<Spawn>, RandomMirror>;

struct GameConfig {
  std::int32_t map_w = 512;
  std::int32_t map_h = 512;
  std::uint64_t seed = 0;
  bool fog = false;
  std::int32_t frame_skip = 1;
  std::int32_t max_frames = 5000;
  Roster roster = default_roster();
  Scenario scenario = std::vector<Spawn>{};

  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

/// Lines: `map <w> <h>`, `seed <u64>`, `fog <0|1>`, `frame_skip <n>`, `max_frames <n>`,
/// `roster <path>`, `spawn <type> <owner> <x> <y>` (repeatable) or `random_mirror <n> <type>`.
/// Relative roster paths resolve against `base_dir`.
GameConfig parse_game_config(std::istream& in, const std::filesystem::path& base_dir = {});
GameConfig load_game_config(const std::filesystem::path& path);

/// Throws ConfigError if sizes, cadence or spawns are unusable.
void check_game_config(const GameConfig& config);

} // namespace skirmish
