#pragma once

// Fixed message set whose encodings live in tests/golden/. Other implementations of
// the protocol decode these files and must re-encode them byte for byte.

#include "skirmish/codec.hpp"
#include "skirmish/engine.hpp"
#include "skirmish/perspective.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace skirmish::testing {

struct GoldenCase {
  std::string name;
  Message message;
};

inline std::vector<GoldenCase> golden_corpus() {
  std::vector<GoldenCase> out;
  out.push_back({"hello_v1", Hello{1, "torch-agent", 0}});
  out.push_back({"hello_unicode", Hello{1, "agent-\xc3\xa9\xe2\x9c\x93", 1}});
  {
    Setup s;
    s.player_id = 0;
    s.map_w = 512;
    s.map_h = 512;
    s.frame_skip = 1;
    s.seed = 42;
    s.roster = default_roster();
    out.push_back({"setup_default", s});
    s.player_id = 1;
    s.fog = true;
    s.frame_skip = 8;
    s.map_w = 1024;
    s.map_h = 768;
    s.seed = 0xFEDCBA9876543210ULL;
    out.push_back({"setup_fog_skip8", s});
  }
  out.push_back({"state_empty", State{}});
  {
    GameConfig g;
    g.seed = 42;
    g.scenario = RandomMirror{5, unit_types::kTrooper};
    World w = init_world(g);
    out.push_back({"state_mirror5_frame0", State{build_player_frame(w, 0)}});
    std::vector<Command> c0, c1;
    for (const auto& u : w.units) {
      if (u.owner == 0) c0.push_back(Attack{u.id, u.id + 5});
    }
    c1.push_back(Move{5, 300, 200});
    apply_commands(w, 0, c0);
    apply_commands(w, 1, c1);
    step(w, 40);
    out.push_back({"state_mirror5_tick40_p0", State{build_player_frame(w, 0)}});
    out.push_back({"state_mirror5_tick40_p1", State{build_player_frame(w, 1)}});
  }
  {
    GameConfig g;
    g.fog = true;
    g.scenario = std::vector<Spawn>{{unit_types::kBlade, 0, 10, 10},
                                    {unit_types::kHawk, 0, 20, 30},
                                    {unit_types::kTrooper, 1, 200, 10},
                                    {unit_types::kHawk, 1, 500, 500}};
    World w = init_world(g);
    std::vector<Command> c{Attack{0, 2}, Move{1, 100, 100}};
    apply_commands(w, 0, c);
    step(w, 3);
    out.push_back({"state_fog_mixed", State{build_player_frame(w, 0)}});
  }
  out.push_back({"commands_empty", Commands{}});
  out.push_back({"commands_stop7", Commands{{Stop{7}}}});
  out.push_back({"commands_mixed", Commands{{Move{0, 511, 0}, Attack{1, 9}, Stop{2}, Move{3, 0, 511}}}});
  out.push_back({"end_win", End{GameResult::Win, 331}});
  out.push_back({"end_loss", End{GameResult::Loss, 17}});
  out.push_back({"end_draw", End{GameResult::Draw, 5000}});
  out.push_back({"restart", Restart{}});
  out.push_back({"quit", Quit{}});
  out.push_back({"error_version", Error{1, "unsupported protocol version 2; server speaks 1"}});
  out.push_back({"error_restart", Error{3, "restart not supported in controlled mode"}});
  return out;
}

inline nlohmann::ordered_json unit_json(const UnitState& u) {
  nlohmann::ordered_json j;
  j["id"] = u.id;
  const char* names[] = {"type", "x", "y", "hp", "shield", "energy", "armor", "size", "gwtype",
                         "awtype", "gwcd", "awcd", "gwattack", "awattack", "gwrange", "awrange",
                         "idle", "target", "target_x", "target_y"};
  const auto fields = unit_fields(u);
  for (std::size_t i = 0; i < kUnitFieldCount; ++i) j[names[i]] = fields[i];
  j["enemy"] = u.enemy;
  return j;
}

/// Language-neutral description of a message, written next to the fixtures.
inline nlohmann::ordered_json message_json(const Message& m) {
  nlohmann::ordered_json j;
  j["tag"] = static_cast<int>(tag_of(m));
  j["kind"] = tag_name(tag_of(m));
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Hello>) {
          j["proto_version"] = v.proto_version;
          j["client_name"] = v.client_name;
          j["requested_role"] = v.requested_role;
        } else if constexpr (std::is_same_v<T, Setup>) {
          j["player_id"] = v.player_id;
          j["map_w"] = v.map_w;
          j["map_h"] = v.map_h;
          j["fog"] = v.fog;
          j["frame_skip"] = v.frame_skip;
          j["seed"] = v.seed;
          auto& roster = j["roster"] = nlohmann::ordered_json::array();
          for (const auto& t : v.roster.types()) {
            roster.push_back({{"type_id", t.type_id}, {"name", t.name}, {"max_hp", t.max_hp},
                              {"max_shield", t.max_shield}, {"max_energy", t.max_energy},
                              {"armor", t.armor}, {"speed_fp", t.speed_fp},
                              {"sight", t.sight_range}, {"flyer", t.flyer},
                              {"ground", {t.ground.damage, t.ground.range, t.ground.cooldown}},
                              {"air", {t.air.damage, t.air.range, t.air.cooldown}}});
          }
        } else if constexpr (std::is_same_v<T, State>) {
          j["frame_number"] = v.frame.frame_number;
          auto& mine = j["units_myself"] = nlohmann::ordered_json::array();
          for (const auto& [id, u] : v.frame.units_myself) mine.push_back(unit_json(u));
          auto& theirs = j["units_enemy"] = nlohmann::ordered_json::array();
          for (const auto& [id, u] : v.frame.units_enemy) theirs.push_back(unit_json(u));
        } else if constexpr (std::is_same_v<T, Commands>) {
          auto& cmds = j["commands"] = nlohmann::ordered_json::array();
          for (const auto& c : v.commands) {
            if (const auto* s = std::get_if<Stop>(&c)) cmds.push_back({{"kind", "stop"}, {"unit", s->unit}});
            if (const auto* mv = std::get_if<Move>(&c)) {
              cmds.push_back({{"kind", "move"}, {"unit", mv->unit}, {"x", mv->x}, {"y", mv->y}});
            }
            if (const auto* a = std::get_if<Attack>(&c)) {
              cmds.push_back({{"kind", "attack"}, {"unit", a->unit}, {"target", a->target}});
            }
          }
        } else if constexpr (std::is_same_v<T, End>) {
          j["result"] = static_cast<int>(v.result);
          j["final_frame"] = v.final_frame;
        } else if constexpr (std::is_same_v<T, Error>) {
          j["code"] = v.code;
          j["text"] = v.text;
        }
      },
      m);
  return j;
}

} // namespace skirmish::testing
