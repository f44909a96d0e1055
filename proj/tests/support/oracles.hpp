#pragma once

// Reference implementations used only by tests. They are deliberately naive
// transcriptions of the rules and share no code with the library's engine.

#include "skirmish/command.hpp"
#include "skirmish/roster.hpp"
#include "skirmish/types.hpp"
#include "skirmish/visibility.hpp"
#include "skirmish/world.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

namespace skirmish::testing {

/// All-pairs visibility check.
inline std::set<UnitId> brute_force_visible(const std::vector<PlacedUnit>& units, PlayerId observer,
                                            const Roster& roster, bool fog) {
  std::set<UnitId> out;
  for (const auto& e : units) {
    if (e.owner == observer) continue;
    if (!fog) {
      out.insert(e.id);
      continue;
    }
    for (const auto& v : units) {
      if (v.owner != observer) continue;
      const long long dx = e.position.x - v.position.x;
      const long long dy = e.position.y - v.position.y;
      const long long s = roster.at(v.type).sight_range;
      if (dx * dx + dy * dy <= s * s) {
        out.insert(e.id);
        break;
      }
    }
  }
  return out;
}

/// Naive engine: flat structs, linear searches, no shared helpers.
struct NaiveUnit {
  int id = 0, type = 0, owner = 0;
  long long fx = 0, fy = 0; // 1/256 px
  int hp = 0, shield = 0, energy = 0, gwcd = 0, awcd = 0;
  int order = 0; // 0 none, 1 move, 2 attack
  int gx = 0, gy = 0, target = -1;
};

struct NaiveWorld {
  unsigned tick = 0;
  int w = 0, h = 0;
  bool fog = false;
  unsigned max_frames = 0;
  std::vector<NaiveUnit> units;
  bool over = false;
  int winner = -1; // -1 draw
};

inline long long naive_isqrt(long long v) {
  long long r = static_cast<long long>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

inline NaiveUnit* naive_find(NaiveWorld& w, int id) {
  for (auto& u : w.units) {
    if (u.id == id) return &u;
  }
  return nullptr;
}

inline void naive_move(NaiveUnit& u, int px, int py, int speed, const NaiveWorld& w) {
  const long long tx = px * 256LL + 128, ty = py * 256LL + 128;
  const long long dx = tx - u.fx, dy = ty - u.fy;
  long long nx, ny;
  if (dx * dx + dy * dy <= 1LL * speed * speed) {
    nx = tx;
    ny = ty;
  } else {
    const long long dist = naive_isqrt(dx * dx + dy * dy);
    nx = u.fx + dx * speed / dist;
    ny = u.fy + dy * speed / dist;
  }
  u.fx = std::min<long long>(std::max<long long>(nx, 0), w.w * 256LL - 1);
  u.fy = std::min<long long>(std::max<long long>(ny, 0), w.h * 256LL - 1);
}

inline NaiveWorld to_naive(const World& world) {
  NaiveWorld n;
  n.tick = world.tick;
  n.w = world.map_w;
  n.h = world.map_h;
  n.fog = world.fog;
  n.max_frames = world.max_frames;
  for (const auto& u : world.units) {
    NaiveUnit x;
    x.id = u.id;
    x.type = u.type;
    x.owner = u.owner;
    x.fx = u.pos.x;
    x.fy = u.pos.y;
    x.hp = u.hp;
    x.shield = u.shield;
    x.energy = u.energy;
    x.gwcd = u.gwcd;
    x.awcd = u.awcd;
    if (const auto* m = std::get_if<MoveTo>(&u.order)) {
      x.order = 1;
      x.gx = m->goal.x;
      x.gy = m->goal.y;
    } else if (const auto* a = std::get_if<AttackUnit>(&u.order)) {
      x.order = 2;
      x.target = a->target;
    }
    n.units.push_back(x);
  }
  if (world.result) {
    n.over = true;
    n.winner = world.result->winner.value_or(-1);
  }
  return n;
}

inline bool same_state(const NaiveWorld& a, const NaiveWorld& b) {
  if (a.tick != b.tick || a.over != b.over || a.winner != b.winner) return false;
  if (a.units.size() != b.units.size()) return false;
  for (std::size_t i = 0; i < a.units.size(); ++i) {
    const auto& x = a.units[i];
    const auto& y = b.units[i];
    if (x.id != y.id || x.type != y.type || x.owner != y.owner || x.fx != y.fx || x.fy != y.fy ||
        x.hp != y.hp || x.shield != y.shield || x.energy != y.energy || x.gwcd != y.gwcd ||
        x.awcd != y.awcd || x.order != y.order) {
      return false;
    }
    if (x.order == 1 && (x.gx != y.gx || x.gy != y.gy)) return false;
    if (x.order == 2 && x.target != y.target) return false;
  }
  return true;
}

inline void naive_apply(NaiveWorld& w, int player, const std::vector<Command>& cmds,
                        const Roster& roster) {
  std::vector<PlacedUnit> placed;
  for (const auto& u : w.units) {
    placed.push_back({u.id, u.type, u.owner, {static_cast<int>(u.fx >> 8), static_cast<int>(u.fy >> 8)}});
  }
  const auto visible = brute_force_visible(placed, player, roster, w.fog);
  for (const auto& cmd : cmds) {
    if (const auto* s = std::get_if<Stop>(&cmd)) {
      auto* u = naive_find(w, s->unit);
      if (u && u->owner == player) u->order = 0;
    } else if (const auto* m = std::get_if<Move>(&cmd)) {
      auto* u = naive_find(w, m->unit);
      if (u && u->owner == player && m->x >= 0 && m->y >= 0 && m->x < w.w && m->y < w.h) {
        u->order = 1;
        u->gx = m->x;
        u->gy = m->y;
      }
    } else if (const auto* a = std::get_if<Attack>(&cmd)) {
      auto* u = naive_find(w, a->unit);
      if (u && u->owner == player && visible.count(a->target)) {
        u->order = 2;
        u->target = a->target;
      }
    }
  }
}

/// One tick, steps (1)-(6) in order.
inline void naive_tick(NaiveWorld& w, const Roster& roster) {
  // (1)
  for (auto& u : w.units) {
    if (u.gwcd > 0) u.gwcd -= 1;
    if (u.awcd > 0) u.awcd -= 1;
  }
  // (2)
  for (auto& u : w.units) {
    if (u.order != 1) continue;
    naive_move(u, u.gx, u.gy, roster.at(u.type).speed_fp, w);
    if (u.fx == u.gx * 256LL + 128 && u.fy == u.gy * 256LL + 128) u.order = 0;
  }
  // (3)
  struct Shot {
    int attacker, target, damage, range;
  };
  std::vector<Shot> shots;
  for (auto& u : w.units) {
    if (u.order != 2) continue;
    NaiveUnit* t = naive_find(w, u.target);
    if (t == nullptr) {
      u.order = 0;
      continue;
    }
    const auto& me = roster.at(u.type);
    const bool air = roster.at(t->type).flyer;
    const int dmg = air ? me.air.damage : me.ground.damage;
    const int range = air ? me.air.range : me.ground.range;
    const long long dx = (u.fx >> 8) - (t->fx >> 8), dy = (u.fy >> 8) - (t->fy >> 8);
    if (dmg == 0 || dx * dx + dy * dy > 1LL * range * range) {
      naive_move(u, static_cast<int>(t->fx >> 8), static_cast<int>(t->fy >> 8), me.speed_fp, w);
      continue;
    }
    int& cd = air ? u.awcd : u.gwcd;
    if (cd == 0) {
      cd = air ? me.air.cooldown : me.ground.cooldown;
      shots.push_back({u.id, t->id, dmg, range});
    }
  }
  // (4)
  for (const auto& s : shots) {
    NaiveUnit* a = naive_find(w, s.attacker);
    NaiveUnit* t = naive_find(w, s.target);
    const long long dx = (a->fx >> 8) - (t->fx >> 8), dy = (a->fy >> 8) - (t->fy >> 8);
    if (dx * dx + dy * dy > 1LL * s.range * s.range) continue;
    int to_shield = std::min(t->shield, s.damage);
    int left = s.damage - to_shield;
    int to_hp = left == 0 ? 0 : std::max(1, left - roster.at(t->type).armor);
    t->shield -= to_shield;
    t->hp -= to_hp;
  }
  std::vector<int> dead;
  for (const auto& u : w.units) {
    if (u.hp <= 0) dead.push_back(u.id);
  }
  std::vector<NaiveUnit> alive;
  for (const auto& u : w.units) {
    if (u.hp > 0) alive.push_back(u);
  }
  w.units = alive;
  for (auto& u : w.units) {
    if (u.order == 2 && std::find(dead.begin(), dead.end(), u.target) != dead.end()) u.order = 0;
  }
  // (5)
  w.tick += 1;
  // (6)
  int n0 = 0, n1 = 0;
  for (const auto& u : w.units) (u.owner == 0 ? n0 : n1) += 1;
  if (n0 == 0 && n1 == 0) {
    w.over = true;
    w.winner = -1;
  } else if (n1 == 0) {
    w.over = true;
    w.winner = 0;
  } else if (n0 == 0) {
    w.over = true;
    w.winner = 1;
  } else if (w.tick >= w.max_frames) {
    w.over = true;
    w.winner = -1;
  }
}

} // namespace skirmish::testing
