#pragma once

#include "skirmish/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace skirmish {

struct Weapon {
  std::int32_t damage = 0;
  std::int32_t range = 0;    // pixels
  std::int32_t cooldown = 0; // ticks

  bool present() const noexcept { return damage > 0; }
  friend bool operator==(const Weapon&, const Weapon&) = default;
};

struct UnitTypeSpec {
  TypeId type_id = 0;
  std::string name;
  std::int32_t max_hp = 0;
  std::int32_t max_shield = 0;
  std::int32_t max_energy = 0;
  std::int32_t armor = 0;
  std::int32_t speed_fp = 0; // 1/256 pixel per tick
  std::int32_t sight_range = 0;
  bool flyer = false;
  Weapon ground;
  Weapon air;

  /// Weapon used against a target of the given class.
  const Weapon& weapon_against(bool target_is_flyer) const noexcept {
    return target_is_flyer ? air : ground;
  }

  friend bool operator==(const UnitTypeSpec&, const UnitTypeSpec&) = default;
};

/// Returns the reasons a type spec is inconsistent (empty when it is fine).
std::vector<std::string> check_type_spec(const UnitTypeSpec& spec);

/// The table of unit types shared with clients at setup.
class Roster {
public:
  Roster() = default;
  /// Throws ConfigError on duplicate ids, ids outside [0,255] or inconsistent specs.
  explicit Roster(std::vector<UnitTypeSpec> types);

  const UnitTypeSpec* find(TypeId id) const noexcept;
  /// Throws ConfigError for unknown ids.
  const UnitTypeSpec& at(TypeId id) const;

  const std::vector<UnitTypeSpec>& types() const noexcept { return types_; }
  std::size_t size() const noexcept { return types_.size(); }
  bool empty() const noexcept { return types_.empty(); }
  std::int32_t max_sight_range() const noexcept;

  friend bool operator==(const Roster&, const Roster&) = default;

private:
  std::vector<UnitTypeSpec> types_; // sorted by type_id
};

namespace unit_types {
inline constexpr TypeId kTrooper = 0;
inline constexpr TypeId kBlade = 1;
inline constexpr TypeId kHawk = 2;
} // namespace unit_types

/// trooper / blade / hawk.
const Roster& default_roster();

/// Roster text format: `type <id> <name> <max_hp> <max_shield> <max_energy> <armor>
/// <speed_fp> <sight> <flyer> <gdmg> <grange> <gcd> <admg> <arange> <acd>`, `#` comments.
Roster parse_roster(std::istream& in);
Roster load_roster(const std::filesystem::path& path);
void write_roster(std::ostream& out, const Roster& roster);

} // namespace skirmish
