#include "skirmish/roster.hpp"

#include "skirmish/errors.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace skirmish {

namespace {

void check_weapon(const Weapon& w, const char* slot, std::vector<std::string>& out) {
  if (w.damage < 0 || w.range < 0 || w.cooldown < 0) {
    out.push_back(std::string(slot) + " weapon has negative fields");
  }
  if (w.damage == 0 && (w.range != 0 || w.cooldown != 0)) {
    out.push_back(std::string(slot) + " weapon without damage must have zero range and cooldown");
  }
}

} // namespace

std::vector<std::string> check_type_spec(const UnitTypeSpec& spec) {
  std::vector<std::string> out;
  if (spec.type_id < 0 || spec.type_id > 255) out.push_back("type id outside [0,255]");
  if (spec.name.empty() || spec.name.size() > 0xFFFF) out.push_back("name length");
  if (spec.max_hp <= 0) out.push_back("max_hp must be positive");
  if (spec.max_shield < 0 || spec.max_energy < 0 || spec.armor < 0) {
    out.push_back("negative shield/energy/armor");
  }
  if (spec.speed_fp < 0) out.push_back("speed must be >= 0");
  if (spec.sight_range <= 0) out.push_back("sight range must be > 0");
  check_weapon(spec.ground, "ground", out);
  check_weapon(spec.air, "air", out);
  return out;
}

Roster::Roster(std::vector<UnitTypeSpec> types) : types_(std::move(types)) {
  std::sort(types_.begin(), types_.end(),
            [](const auto& a, const auto& b) { return a.type_id < b.type_id; });
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (auto problems = check_type_spec(types_[i]); !problems.empty()) {
      throw ConfigError("unit type " + std::to_string(types_[i].type_id) + ": " + problems.front());
    }
    if (i > 0 && types_[i - 1].type_id == types_[i].type_id) {
      throw ConfigError("duplicate unit type id " + std::to_string(types_[i].type_id));
    }
  }
  if (types_.size() > 255) throw ConfigError("roster holds more than 255 types");
}

const UnitTypeSpec* Roster::find(TypeId id) const noexcept {
  auto it = std::lower_bound(types_.begin(), types_.end(), id,
                             [](const UnitTypeSpec& t, TypeId v) { return t.type_id < v; });
  return it != types_.end() && it->type_id == id ? &*it : nullptr;
}

const UnitTypeSpec& Roster::at(TypeId id) const {
  if (const auto* spec = find(id)) return *spec;
  throw ConfigError("unknown unit type " + std::to_string(id));
}

std::int32_t Roster::max_sight_range() const noexcept {
  std::int32_t best = 0;
  for (const auto& t : types_) best = std::max(best, t.sight_range);
  return best;
}

const Roster& default_roster() {
  static const Roster roster{{
      {unit_types::kTrooper, "trooper", 40, 0, 0, 0, 256, 256, false, {6, 128, 15}, {6, 128, 15}},
      {unit_types::kBlade, "blade", 80, 20, 0, 1, 320, 224, false, {8, 16, 14}, {0, 0, 0}},
      {unit_types::kHawk, "hawk", 60, 0, 0, 0, 384, 288, true, {7, 160, 20}, {7, 160, 20}},
  }};
  return roster;
}

Roster parse_roster(std::istream& in) {
  std::vector<UnitTypeSpec> types;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string keyword;
    if (!(ls >> keyword) || keyword.front() == '#') continue;
    if (keyword != "type") {
      throw ConfigError("roster line " + std::to_string(line_no) + ": expected 'type'");
    }
    UnitTypeSpec t;
    int flyer = 0;
    if (!(ls >> t.type_id >> t.name >> t.max_hp >> t.max_shield >> t.max_energy >> t.armor >>
          t.speed_fp >> t.sight_range >> flyer >> t.ground.damage >> t.ground.range >>
          t.ground.cooldown >> t.air.damage >> t.air.range >> t.air.cooldown)) {
      throw ConfigError("roster line " + std::to_string(line_no) + ": expected 15 fields");
    }
    if (flyer != 0 && flyer != 1) {
      throw ConfigError("roster line " + std::to_string(line_no) + ": flyer must be 0 or 1");
    }
    std::string extra;
    if (ls >> extra) {
      throw ConfigError("roster line " + std::to_string(line_no) + ": trailing tokens");
    }
    t.flyer = flyer == 1;
    types.push_back(std::move(t));
  }
  return Roster(std::move(types));
}

Roster load_roster(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open roster file " + path.string());
  return parse_roster(in);
}

void write_roster(std::ostream& out, const Roster& roster) {
  out << "# type id name max_hp max_shield max_energy armor speed_fp sight flyer "
         "gdmg grange gcd admg arange acd\n";
  for (const auto& t : roster.types()) {
    out << "type " << t.type_id << ' ' << t.name << ' ' << t.max_hp << ' ' << t.max_shield << ' '
        << t.max_energy << ' ' << t.armor << ' ' << t.speed_fp << ' ' << t.sight_range << ' '
        << (t.flyer ? 1 : 0) << ' ' << t.ground.damage << ' ' << t.ground.range << ' '
        << t.ground.cooldown << ' ' << t.air.damage << ' ' << t.air.range << ' '
        << t.air.cooldown << '\n';
  }
}

} // namespace skirmish
