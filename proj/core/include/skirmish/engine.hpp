#pragma once

#include "skirmish/command.hpp"
#include "skirmish/game_config.hpp"
#include "skirmish/world.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace skirmish {

/// Integer square root: largest r with r*r <= v.
std::uint64_t isqrt(std::uint64_t v) noexcept;

/// Builds tick-0 world for the scenario. Throws ConfigError for out-of-bounds spawns or
/// unknown types.
World init_world(const GameConfig& config);

struct CommandOutcome {
  bool accepted = false;
  std::string reason; // empty when accepted
  friend bool operator==(const CommandOutcome&, const CommandOutcome&) = default;
};

/// Replaces unit orders for `player`. Rejections are returned, not thrown.
/// Throws UsageError if the match already ended.
std::vector<CommandOutcome> apply_commands(World& world, PlayerId player,
                                           std::span<const Command> cmds);

/// One movement increment toward the center of pixel `target`, clamped to the map.
FixedPos move_toward(FixedPos pos, Position target, std::int32_t speed_fp, std::int32_t map_w,
                     std::int32_t map_h) noexcept;

struct Hit {
  std::int32_t shield_damage = 0;
  std::int32_t hp_damage = 0;
  friend bool operator==(const Hit&, const Hit&) = default;
};

/// Shields soak raw damage first; whatever is left is reduced by armor, minimum 1.
Hit resolve_hit(std::int32_t raw_damage, std::int32_t target_shield,
                std::int32_t target_armor) noexcept;
/// resolve_hit using the weapon `attacker` would fire at `target`.
Hit resolve_attack(const SimUnit& attacker, const SimUnit& target, const Roster& roster);

enum class WeaponSlot : std::uint8_t { Ground, Air };

struct DamageEvent {
  std::uint32_t tick = 0; // tick at which the volley happened (before increment)
  UnitId attacker = 0;
  UnitId target = 0;
  WeaponSlot weapon = WeaponSlot::Ground;
  std::int32_t raw_damage = 0;
  Hit hit;
  std::int64_t distance_sq = 0;
  std::int32_t range = 0;
  friend bool operator==(const DamageEvent&, const DamageEvent&) = default;
};

struct DeathEvent {
  std::uint32_t tick = 0;
  UnitId unit = 0;
  PlayerId owner = 0;
  friend bool operator==(const DeathEvent&, const DeathEvent&) = default;
};

struct StepEvents {
  std::uint32_t ticks_run = 0;
  std::vector<DamageEvent> damage;
  std::vector<DeathEvent> deaths;
};

/// Advances up to `ticks` ticks, stopping early once the match has a result.
/// Throws UsageError if called after the result is set or with ticks < 1.
StepEvents step(World& world, std::uint32_t ticks);

/// Result the world would report now, without mutating it.
std::optional<MatchOutcome> check_end(const World& world) noexcept;

} // namespace skirmish
