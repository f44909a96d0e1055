#include "skirmish/frame.hpp"

namespace skirmish {

namespace {

class Report {
public:
  explicit Report(std::vector<std::string>& out) : out_(out) {}
  void add(UnitId id, const std::string& what) {
    out_.push_back("unit " + std::to_string(id) + ": " + what);
  }

private:
  std::vector<std::string>& out_;
};

void check_weapon_triplet(Report& r, UnitId id, const char* prefix, std::int32_t type,
                          std::int32_t attack, std::int32_t range) {
  const bool none = type == 0;
  if (type != 0 && type != 1) r.add(id, std::string(prefix) + "type must be 0 or 1");
  if (none != (attack == 0) || none != (range == 0)) {
    r.add(id, std::string(prefix) + "type/" + prefix + "attack/" + prefix +
                  "range disagree about weapon presence");
  }
}

void check_unit(Report& r, UnitId key, const UnitState& u, bool enemy_group, std::int32_t map_w,
                std::int32_t map_h, const Roster& roster) {
  const UnitId id = u.id;
  if (key != id) r.add(key, "map key does not match id " + std::to_string(id));
  if (id < 0) r.add(id, "negative id");
  if (u.enemy != enemy_group) r.add(id, "enemy flag does not match group");
  if (u.position.x < 0 || u.position.x >= map_w) r.add(id, "x out of bounds");
  if (u.position.y < 0 || u.position.y >= map_h) r.add(id, "y out of bounds");
  if (u.targetpos.x < 0 || u.targetpos.x >= map_w) r.add(id, "targetpos x out of bounds");
  if (u.targetpos.y < 0 || u.targetpos.y >= map_h) r.add(id, "targetpos y out of bounds");

  struct NonNegative {
    const char* name;
    std::int32_t value;
  };
  for (const auto& f : {NonNegative{"hp", u.hp}, {"shield", u.shield}, {"energy", u.energy},
                        {"armor", u.armor}, {"gwcd", u.gwcd}, {"awcd", u.awcd},
                        {"gwattack", u.gwattack}, {"awattack", u.awattack},
                        {"gwrange", u.gwrange}, {"awrange", u.awrange}}) {
    if (f.value < 0) r.add(id, std::string(f.name) + " negative");
  }
  check_weapon_triplet(r, id, "gw", u.gwtype, u.gwattack, u.gwrange);
  check_weapon_triplet(r, id, "aw", u.awtype, u.awattack, u.awrange);

  if (u.target < kNoTarget) r.add(id, "target must be -1 or a unit id");
  if (u.idle && u.target != kNoTarget) r.add(id, "idle unit has a target");
  if (u.idle && u.targetpos != Position{}) r.add(id, "idle unit has a targetpos");
  if (u.target != kNoTarget && u.targetpos != Position{}) r.add(id, "attacking unit has a targetpos");

  const auto* spec = roster.find(u.type);
  if (spec == nullptr) {
    r.add(id, "unknown type " + std::to_string(u.type));
    return;
  }
  if (u.hp > spec->max_hp) r.add(id, "hp exceeds max_hp");
  if (u.shield > spec->max_shield) r.add(id, "shield exceeds max_shield");
  if (u.energy > spec->max_energy) r.add(id, "energy exceeds max_energy");
  if (u.gwcd > spec->ground.cooldown) r.add(id, "gwcd exceeds ground cooldown");
  if (u.awcd > spec->air.cooldown) r.add(id, "awcd exceeds air cooldown");
}

} // namespace

std::vector<std::string> validate_frame(const Frame& frame, std::int32_t map_w, std::int32_t map_h,
                                        const Roster& roster) {
  std::vector<std::string> out;
  Report report(out);
  for (const auto& [key, unit] : frame.units_myself) {
    check_unit(report, key, unit, false, map_w, map_h, roster);
  }
  for (const auto& [key, unit] : frame.units_enemy) {
    check_unit(report, key, unit, true, map_w, map_h, roster);
    if (frame.units_myself.contains(key)) report.add(key, "listed as both own and enemy");
  }
  return out;
}

} // namespace skirmish
