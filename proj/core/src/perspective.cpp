#include "skirmish/perspective.hpp"

#include <stdexcept>

namespace skirmish {

UnitState observe_unit(const SimUnit& u, const Roster& roster, bool enemy) {
  const auto& spec = roster.at(u.type);
  UnitState s;
  s.id = u.id;
  s.type = u.type;
  s.position = u.pixel();
  s.hp = u.hp;
  s.shield = u.shield;
  s.energy = u.energy;
  s.armor = spec.armor;
  s.size = 1;
  s.gwtype = spec.ground.present() ? 1 : 0;
  s.awtype = spec.air.present() ? 1 : 0;
  s.gwcd = u.gwcd;
  s.awcd = u.awcd;
  s.gwattack = spec.ground.damage;
  s.awattack = spec.air.damage;
  s.gwrange = spec.ground.range;
  s.awrange = spec.air.range;
  s.idle = u.idle();
  if (const auto* move = std::get_if<MoveTo>(&u.order)) s.targetpos = move->goal;
  if (const auto* attack = std::get_if<AttackUnit>(&u.order)) s.target = attack->target;
  s.enemy = enemy;
  return s;
}

std::vector<PlacedUnit> placed_units(const World& world) {
  std::vector<PlacedUnit> out;
  out.reserve(world.units.size());
  for (const auto& u : world.units) out.push_back({u.id, u.type, u.owner, u.pixel()});
  return out;
}

Frame build_player_frame(const World& world, PlayerId player, bool fog) {
  if (player != 0 && player != 1) {
    throw std::invalid_argument("unknown player " + std::to_string(player));
  }
  Frame f;
  f.frame_number = world.tick;
  for (const auto& u : world.units) {
    if (u.owner == player) f.units_myself.emplace_hint(f.units_myself.end(), u.id,
                                                       observe_unit(u, world.roster, false));
  }
  const auto placed = placed_units(world);
  for (UnitId id : visible_enemies(placed, player, world.roster, fog)) {
    f.units_enemy.emplace_hint(f.units_enemy.end(), id,
                               observe_unit(*world.find(id), world.roster, true));
  }
  return f;
}

} // namespace skirmish
