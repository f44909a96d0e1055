#include "skirmish/helpers.hpp"

#include <limits>
#include <stdexcept>

namespace skirmish {

namespace {

struct WeaponView {
  std::int32_t damage;
  std::int32_t range;
};

WeaponView weapon_for(const UnitState& attacker, const UnitState& target, const Roster& roster) {
  if (roster.at(target.type).flyer) return {attacker.awattack, attacker.awrange};
  return {attacker.gwattack, attacker.gwrange};
}

std::optional<UnitId> nearest(const UnitMap& candidates, Position from,
                              const auto& accept) {
  std::optional<UnitId> best;
  std::int64_t best_d2 = std::numeric_limits<std::int64_t>::max();
  for (const auto& [id, u] : candidates) {
    if (!accept(u)) continue;
    const std::int64_t d2 = squared_distance(from, u.position);
    // Map iteration is ascending by id, so strict < keeps the lowest id on ties.
    if (d2 < best_d2) {
      best_d2 = d2;
      best = id;
    }
  }
  return best;
}

} // namespace

bool can_hit(const UnitState& attacker, const UnitState& target, const Roster& roster) {
  return weapon_for(attacker, target, roster).damage > 0;
}

bool in_range(const UnitState& attacker, const UnitState& target, const Roster& roster) {
  const auto w = weapon_for(attacker, target, roster);
  if (w.damage <= 0) return false;
  const std::int64_t r = w.range;
  return squared_distance(attacker.position, target.position) <= r * r;
}

std::optional<UnitId> closest_enemy(const Frame& frame, UnitId unit) {
  const auto any = [](const UnitState&) { return true; };
  if (auto it = frame.units_myself.find(unit); it != frame.units_myself.end()) {
    return nearest(frame.units_enemy, it->second.position, any);
  }
  if (auto it = frame.units_enemy.find(unit); it != frame.units_enemy.end()) {
    return nearest(frame.units_myself, it->second.position, any);
  }
  throw std::out_of_range("unit " + std::to_string(unit) + " is not in the frame");
}

std::vector<Command> attack_closest(const Frame& frame, const Roster& roster) {
  std::vector<Command> out;
  for (const auto& [id, me] : frame.units_myself) {
    const auto target = nearest(frame.units_enemy, me.position, [&](const UnitState& e) {
      return can_hit(me, e, roster);
    });
    if (target) out.emplace_back(Attack{id, *target});
  }
  return out;
}

} // namespace skirmish
