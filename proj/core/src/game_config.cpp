#include "skirmish/game_config.hpp"

#include "skirmish/errors.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>

namespace skirmish {

namespace {

[[noreturn]] void bad_line(int line_no, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line_no) + ": " + what);
}

template <typename... Ts>
void read_exact(std::istringstream& ls, int line_no, const char* keyword, Ts&... values) {
  if (!((ls >> values) && ...)) bad_line(line_no, std::string("malformed '") + keyword + "'");
  std::string extra;
  if (ls >> extra) bad_line(line_no, std::string("trailing tokens after '") + keyword + "'");
}

} // namespace

GameConfig parse_game_config(std::istream& in, const std::filesystem::path& base_dir) {
  GameConfig config;
  std::vector<Spawn> spawns;
  std::optional<RandomMirror> mirror;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key.front() == '#') continue;
    if (key == "map") {
      read_exact(ls, line_no, "map", config.map_w, config.map_h);
    } else if (key == "seed") {
      read_exact(ls, line_no, "seed", config.seed);
    } else if (key == "fog") {
      int fog = 0;
      read_exact(ls, line_no, "fog", fog);
      if (fog != 0 && fog != 1) bad_line(line_no, "fog must be 0 or 1");
      config.fog = fog == 1;
    } else if (key == "frame_skip") {
      read_exact(ls, line_no, "frame_skip", config.frame_skip);
    } else if (key == "max_frames") {
      read_exact(ls, line_no, "max_frames", config.max_frames);
    } else if (key == "roster") {
      std::string path;
      read_exact(ls, line_no, "roster", path);
      std::filesystem::path p(path);
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      config.roster = load_roster(p);
    } else if (key == "spawn") {
      Spawn s;
      read_exact(ls, line_no, "spawn", s.type, s.owner, s.x, s.y);
      spawns.push_back(s);
    } else if (key == "random_mirror") {
      RandomMirror m;
      read_exact(ls, line_no, "random_mirror", m.count, m.type);
      if (mirror) bad_line(line_no, "random_mirror given twice");
      mirror = m;
    } else {
      bad_line(line_no, "unknown key '" + key + "'");
    }
  }
  if (mirror && !spawns.empty()) {
    throw ConfigError("config mixes spawn lines with random_mirror");
  }
  if (mirror) {
    config.scenario = *mirror;
  } else {
    config.scenario = std::move(spawns);
  }
  check_game_config(config);
  return config;
}

GameConfig load_game_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_game_config(in, path.parent_path());
}

void check_game_config(const GameConfig& c) {
  if (c.map_w <= 0 || c.map_h <= 0) throw ConfigError("map dimensions must be positive");
  if (c.map_w > (1 << 22) || c.map_h > (1 << 22)) {
    throw ConfigError("map dimensions exceed the fixed-point range");
  }
  if (c.frame_skip < 1 || c.frame_skip > 255) throw ConfigError("frame_skip must be in [1,255]");
  if (c.max_frames < 1) throw ConfigError("max_frames must be >= 1");
  if (c.roster.empty()) throw ConfigError("roster is empty");
  if (const auto* spawns = std::get_if<std::vector<Spawn>>(&c.scenario)) {
    for (const auto& s : *spawns) {
      if (c.roster.find(s.type) == nullptr) {
        throw ConfigError("spawn uses unknown unit type " + std::to_string(s.type));
      }
      if (s.owner != 0 && s.owner != 1) throw ConfigError("spawn owner must be 0 or 1");
      if (s.x < 0 || s.y < 0 || s.x >= c.map_w || s.y >= c.map_h) {
        throw ConfigError("spawn at (" + std::to_string(s.x) + "," + std::to_string(s.y) +
                          ") is out of bounds");
      }
    }
  } else {
    const auto& m = std::get<RandomMirror>(c.scenario);
    if (m.count < 0) throw ConfigError("random_mirror count must be >= 0");
    if (c.roster.find(m.type) == nullptr) {
      throw ConfigError("random_mirror uses unknown unit type " + std::to_string(m.type));
    }
    if (3 * c.map_w / 8 - c.map_w / 8 <= 0 || 3 * c.map_h / 4 - c.map_h / 4 <= 0) {
      throw ConfigError("map too small for random_mirror placement");
    }
  }
}

} // namespace skirmish
