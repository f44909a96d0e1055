#include "skirmish/engine.hpp"

#include "skirmish/errors.hpp"
#include "skirmish/perspective.hpp"
#include "skirmish/visibility.hpp"

#include <algorithm>

namespace skirmish {

const SimUnit* World::find(UnitId id) const noexcept {
  auto it = std::lower_bound(units.begin(), units.end(), id,
                             [](const SimUnit& u, UnitId v) { return u.id < v; });
  return it != units.end() && it->id == id ? &*it : nullptr;
}

SimUnit* World::find(UnitId id) noexcept {
  return const_cast<SimUnit*>(std::as_const(*this).find(id));
}

std::size_t World::count_owned(PlayerId player) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(units.begin(), units.end(), [&](const SimUnit& u) { return u.owner == player; }));
}

std::uint64_t isqrt(std::uint64_t v) noexcept {
  // Bitwise method; exact for the full 64-bit range.
  std::uint64_t result = 0;
  std::uint64_t bit = std::uint64_t{1} << 62;
  while (bit > v) bit >>= 2;
  while (bit != 0) {
    if (v >= result + bit) {
      v -= result + bit;
      result = (result >> 1) + bit;
    } else {
      result >>= 1;
    }
    bit >>= 2;
  }
  return result;
}

namespace {

SimUnit spawn_unit(UnitId id, const UnitTypeSpec& spec, PlayerId owner, Position at) {
  SimUnit u;
  u.id = id;
  u.type = spec.type_id;
  u.owner = owner;
  u.pos = FixedPos::center_of(at);
  u.hp = spec.max_hp;
  u.shield = spec.max_shield;
  u.energy = spec.max_energy;
  return u;
}

std::int32_t& cooldown(SimUnit& u, WeaponSlot slot) noexcept {
  return slot == WeaponSlot::Air ? u.awcd : u.gwcd;
}

struct QueuedShot {
  UnitId attacker;
  UnitId target;
  WeaponSlot slot;
  std::int32_t raw_damage;
  std::int32_t range;
};

} // namespace

World init_world(const GameConfig& config) {
  check_game_config(config);
  World w;
  w.map_w = config.map_w;
  w.map_h = config.map_h;
  w.fog = config.fog;
  w.max_frames = static_cast<std::uint32_t>(config.max_frames);
  w.rng = RngState{config.seed};
  w.roster = config.roster;

  if (const auto* spawns = std::get_if<std::vector<Spawn>>(&config.scenario)) {
    UnitId next = 0;
    for (const auto& s : *spawns) {
      w.units.push_back(spawn_unit(next++, w.roster.at(s.type), s.owner, {s.x, s.y}));
    }
  } else {
    const auto& m = std::get<RandomMirror>(config.scenario);
    const auto& spec = w.roster.at(m.type);
    const std::int64_t x_lo = w.map_w / 8, x_span = 3 * w.map_w / 8 - x_lo;
    const std::int64_t y_lo = w.map_h / 4, y_span = 3 * w.map_h / 4 - y_lo;
    std::vector<Position> left;
    for (std::int32_t i = 0; i < m.count; ++i) {
      const auto x = static_cast<std::int32_t>(x_lo + rng_next(w.rng) % x_span);
      const auto y = static_cast<std::int32_t>(y_lo + rng_next(w.rng) % y_span);
      left.push_back({x, y});
    }
    UnitId next = 0;
    for (const auto& p : left) w.units.push_back(spawn_unit(next++, spec, 0, p));
    for (const auto& p : left) {
      w.units.push_back(spawn_unit(next++, spec, 1, {w.map_w - 1 - p.x, w.map_h - 1 - p.y}));
    }
  }
  return w;
}

std::vector<CommandOutcome> apply_commands(World& world, PlayerId player,
                                           std::span<const Command> cmds) {
  if (world.result) throw UsageError("apply_commands on a finished match");
  const auto placed = placed_units(world);
  const auto visible = visible_enemies(placed, player, world.roster, world.fog);

  std::vector<CommandOutcome> out;
  out.reserve(cmds.size());
  for (const auto& cmd : cmds) {
    SimUnit* u = world.find(acting_unit(cmd));
    if (u == nullptr) {
      out.push_back({false, "unknown or dead unit"});
      continue;
    }
    if (u->owner != player) {
      out.push_back({false, "not owner"});
      continue;
    }
    CommandOutcome result{true, {}};
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, Stop>) {
            u->order = std::monostate{};
          } else if constexpr (std::is_same_v<T, Move>) {
            if (!world.in_bounds({c.x, c.y})) {
              result = {false, "out of bounds"};
            } else {
              u->order = MoveTo{{c.x, c.y}};
            }
          } else {
            if (!std::binary_search(visible.begin(), visible.end(), c.target)) {
              result = {false, "target not visible"};
            } else {
              u->order = AttackUnit{c.target};
            }
          }
        },
        cmd);
    out.push_back(std::move(result));
  }
  return out;
}

FixedPos move_toward(FixedPos pos, Position target, std::int32_t speed_fp, std::int32_t map_w,
                     std::int32_t map_h) noexcept {
  const FixedPos goal = FixedPos::center_of(target);
  const std::int64_t dx = std::int64_t{goal.x} - pos.x;
  const std::int64_t dy = std::int64_t{goal.y} - pos.y;
  const std::int64_t d2 = dx * dx + dy * dy;
  const std::int64_t speed = speed_fp;
  FixedPos next = goal;
  if (d2 > speed * speed) {
    const auto dist = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(d2)));
    next.x = static_cast<std::int32_t>(pos.x + dx * speed / dist);
    next.y = static_cast<std::int32_t>(pos.y + dy * speed / dist);
  }
  next.x = std::clamp(next.x, 0, map_w * kFixedOne - 1);
  next.y = std::clamp(next.y, 0, map_h * kFixedOne - 1);
  return next;
}

Hit resolve_hit(std::int32_t raw_damage, std::int32_t target_shield,
                std::int32_t target_armor) noexcept {
  Hit hit;
  hit.shield_damage = std::min(std::max(target_shield, 0), raw_damage);
  const std::int32_t leftover = raw_damage - hit.shield_damage;
  hit.hp_damage = leftover == 0 ? 0 : std::max(1, leftover - target_armor);
  return hit;
}

Hit resolve_attack(const SimUnit& attacker, const SimUnit& target, const Roster& roster) {
  const auto& target_spec = roster.at(target.type);
  const auto& weapon = roster.at(attacker.type).weapon_against(target_spec.flyer);
  return resolve_hit(weapon.damage, target.shield, target_spec.armor);
}

std::optional<MatchOutcome> check_end(const World& world) noexcept {
  const std::size_t mine = world.count_owned(0);
  const std::size_t theirs = world.count_owned(1);
  if (mine == 0 && theirs == 0) return MatchOutcome{std::nullopt, world.tick};
  if (theirs == 0) return MatchOutcome{PlayerId{0}, world.tick};
  if (mine == 0) return MatchOutcome{PlayerId{1}, world.tick};
  if (world.tick >= world.max_frames) return MatchOutcome{std::nullopt, world.tick};
  return std::nullopt;
}

StepEvents step(World& world, std::uint32_t ticks) {
  if (world.result) throw UsageError("step on a finished match");
  if (ticks < 1) throw UsageError("step needs at least one tick");

  StepEvents events;
  std::vector<QueuedShot> shots;
  for (std::uint32_t t = 0; t < ticks; ++t) {
    // (1) cooldowns
    for (auto& u : world.units) {
      if (u.gwcd > 0) --u.gwcd;
      if (u.awcd > 0) --u.awcd;
    }

    // (2) movement orders
    for (auto& u : world.units) {
      const auto* move = std::get_if<MoveTo>(&u.order);
      if (move == nullptr) continue;
      const auto& spec = world.roster.at(u.type);
      u.pos = move_toward(u.pos, move->goal, spec.speed_fp, world.map_w, world.map_h);
      if (u.pos == FixedPos::center_of(move->goal)) u.order = std::monostate{};
    }

    // (3) attack orders: chase or fire
    shots.clear();
    for (auto& u : world.units) {
      const auto* attack = std::get_if<AttackUnit>(&u.order);
      if (attack == nullptr) continue;
      const SimUnit* target = world.find(attack->target);
      if (target == nullptr) {
        u.order = std::monostate{};
        continue;
      }
      const auto& spec = world.roster.at(u.type);
      const bool air = world.roster.at(target->type).flyer;
      const Weapon& weapon = spec.weapon_against(air);
      const std::int64_t range = weapon.range;
      if (!weapon.present() || squared_distance(u.pixel(), target->pixel()) > range * range) {
        u.pos = move_toward(u.pos, target->pixel(), spec.speed_fp, world.map_w, world.map_h);
        continue;
      }
      const WeaponSlot slot = air ? WeaponSlot::Air : WeaponSlot::Ground;
      std::int32_t& cd = cooldown(u, slot);
      if (cd != 0) continue;
      cd = weapon.cooldown;
      shots.push_back({u.id, target->id, slot, weapon.damage, weapon.range});
    }

    // (4) simultaneous damage; a shot whose target has since left range is wasted
    for (const auto& shot : shots) {
      const SimUnit* attacker = world.find(shot.attacker);
      SimUnit* target = world.find(shot.target);
      const std::int64_t d2 = squared_distance(attacker->pixel(), target->pixel());
      if (d2 > std::int64_t{shot.range} * shot.range) continue;
      const Hit hit =
          resolve_hit(shot.raw_damage, target->shield, world.roster.at(target->type).armor);
      target->shield -= hit.shield_damage;
      target->hp -= hit.hp_damage;
      events.damage.push_back(
          {world.tick, shot.attacker, shot.target, shot.slot, shot.raw_damage, hit, d2, shot.range});
    }
    std::vector<UnitId> dead;
    for (const auto& u : world.units) {
      if (u.hp <= 0) {
        dead.push_back(u.id);
        events.deaths.push_back({world.tick, u.id, u.owner});
      }
    }
    if (!dead.empty()) {
      std::erase_if(world.units, [](const SimUnit& u) { return u.hp <= 0; });
      for (auto& u : world.units) {
        const auto* attack = std::get_if<AttackUnit>(&u.order);
        if (attack != nullptr && std::binary_search(dead.begin(), dead.end(), attack->target)) {
          u.order = std::monostate{};
        }
      }
    }

    // (5), (6)
    ++world.tick;
    ++events.ticks_run;
    if (auto outcome = check_end(world)) {
      world.result = outcome;
      break;
    }
  }
  return events;
}

} // namespace skirmish
