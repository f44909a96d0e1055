#include "skirmish/codec.hpp"

#include "byte_io.hpp"

#include <limits>

namespace skirmish {

using detail::ByteReader;
using detail::ByteWriter;

MessageTag tag_of(const Message& msg) noexcept {
  return static_cast<MessageTag>(msg.index() + 1);
}

const char* tag_name(MessageTag tag) noexcept {
  switch (tag) {
  case MessageTag::Hello: return "HELLO";
  case MessageTag::Setup: return "SETUP";
  case MessageTag::State: return "STATE";
  case MessageTag::Commands: return "COMMANDS";
  case MessageTag::End: return "END";
  case MessageTag::Restart: return "RESTART";
  case MessageTag::Quit: return "QUIT";
  case MessageTag::Error: return "ERROR";
  case MessageTag::Delta: return "DELTA";
  }
  return "UNKNOWN";
}

UnitFields unit_fields(const UnitState& u) noexcept {
  return {u.type,     u.position.x, u.position.y, u.hp,       u.shield,   u.energy,  u.armor,
          u.size,     u.gwtype,     u.awtype,     u.gwcd,     u.awcd,     u.gwattack,
          u.awattack, u.gwrange,    u.awrange,    u.idle ? 1 : 0,         u.target,
          u.targetpos.x, u.targetpos.y};
}

bool unit_from_fields(UnitId id, const UnitFields& f, bool enemy, UnitState& u) noexcept {
  const auto at = [&](UnitField field) { return f[static_cast<std::size_t>(field)]; };
  const std::int32_t idle = at(UnitField::Idle);
  if (idle != 0 && idle != 1) return false;
  u.id = id;
  u.type = at(UnitField::Type);
  u.position = {at(UnitField::X), at(UnitField::Y)};
  u.hp = at(UnitField::Hp);
  u.shield = at(UnitField::Shield);
  u.energy = at(UnitField::Energy);
  u.armor = at(UnitField::Armor);
  u.size = at(UnitField::Size);
  u.gwtype = at(UnitField::GwType);
  u.awtype = at(UnitField::AwType);
  u.gwcd = at(UnitField::GwCd);
  u.awcd = at(UnitField::AwCd);
  u.gwattack = at(UnitField::GwAttack);
  u.awattack = at(UnitField::AwAttack);
  u.gwrange = at(UnitField::GwRange);
  u.awrange = at(UnitField::AwRange);
  u.idle = idle == 1;
  u.target = at(UnitField::Target);
  u.targetpos = {at(UnitField::TargetX), at(UnitField::TargetY)};
  u.enemy = enemy;
  return true;
}

namespace detail {

void check_frame_encodable(const Frame& frame) {
  for (const auto* group : {&frame.units_myself, &frame.units_enemy}) {
    if (group->size() > 0xFFFF) throw EncodeError("more than 65535 units in a group");
    for (const auto& [key, unit] : *group) {
      if (key != unit.id) throw EncodeError("unit map key differs from unit id");
      if (key < 0) throw EncodeError("negative unit id");
    }
  }
  for (const auto& [key, unit] : frame.units_enemy) {
    if (frame.units_myself.contains(key)) {
      throw EncodeError("unit " + std::to_string(key) + " is in both groups");
    }
  }
}

void write_unit_group(ByteWriter& w, const UnitMap& group) {
  w.u16(static_cast<std::uint16_t>(group.size()));
  for (const auto& [id, unit] : group) {
    w.u32(static_cast<std::uint32_t>(id));
    for (std::int32_t v : unit_fields(unit)) w.i32(v);
  }
}

UnitMap read_unit_group(ByteReader& r, bool enemy, const UnitMap* other_group) {
  const std::size_t count_at = r.offset();
  const std::size_t count = r.u16();
  r.expect_room(count, kUnitRecordBytes, count_at, "unit");
  UnitMap group;
  std::int64_t prev = -1;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t at = r.offset();
    const std::uint32_t raw_id = r.u32();
    if (raw_id > static_cast<std::uint32_t>(std::numeric_limits<std::int32_t>::max())) {
      r.fail("unit id out of range", at);
    }
    const auto id = static_cast<UnitId>(raw_id);
    if (id == prev) r.fail("duplicate unit id " + std::to_string(id), at);
    if (id < prev) r.fail("unit ids not ascending", at);
    if (other_group != nullptr && other_group->contains(id)) {
      r.fail("duplicate unit id " + std::to_string(id) + " across groups", at);
    }
    prev = id;
    UnitFields fields;
    for (auto& f : fields) f = r.i32();
    UnitState unit;
    if (!unit_from_fields(id, fields, enemy, unit)) r.fail("idle flag must be 0 or 1", at);
    group.emplace_hint(group.end(), id, unit);
  }
  return group;
}

} // namespace detail

namespace {

void encode_roster(ByteWriter& w, const Roster& roster) {
  if (roster.size() > 255) throw EncodeError("roster larger than 255 types");
  w.u8(static_cast<std::uint8_t>(roster.size()));
  for (const auto& t : roster.types()) {
    w.u8(static_cast<std::uint8_t>(t.type_id));
    w.str(t.name);
    for (std::int32_t v : {t.max_hp, t.max_shield, t.max_energy, t.armor, t.speed_fp, t.sight_range}) {
      w.i32(v);
    }
    w.u8(t.flyer ? 1 : 0);
    for (std::int32_t v : {t.ground.damage, t.ground.range, t.ground.cooldown, t.air.damage,
                           t.air.range, t.air.cooldown}) {
      w.i32(v);
    }
  }
}

Roster decode_roster(ByteReader& r) {
  const std::size_t count = r.u8();
  std::vector<UnitTypeSpec> types;
  types.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t at = r.offset();
    UnitTypeSpec t;
    t.type_id = r.u8();
    if (!types.empty() && t.type_id <= types.back().type_id) {
      r.fail("roster type ids not ascending", at);
    }
    t.name = r.str();
    t.max_hp = r.i32();
    t.max_shield = r.i32();
    t.max_energy = r.i32();
    t.armor = r.i32();
    t.speed_fp = r.i32();
    t.sight_range = r.i32();
    const std::uint8_t flyer = r.u8();
    if (flyer > 1) r.fail("flyer flag must be 0 or 1");
    t.flyer = flyer == 1;
    t.ground = {r.i32(), r.i32(), r.i32()};
    t.air = {r.i32(), r.i32(), r.i32()};
    if (auto problems = check_type_spec(t); !problems.empty()) {
      r.fail("invalid unit type " + std::to_string(t.type_id) + ": " + problems.front(), at);
    }
    types.push_back(std::move(t));
  }
  return Roster(std::move(types));
}

struct BodyEncoder {
  ByteWriter& w;

  void operator()(const Hello& m) const {
    w.u16(m.proto_version);
    w.str(m.client_name);
    w.u8(m.requested_role);
  }
  void operator()(const Setup& m) const {
    if (m.player_id > 1) throw EncodeError("player id must be 0 or 1");
    if (m.frame_skip == 0) throw EncodeError("frame_skip must be >= 1");
    w.u8(m.player_id);
    w.u32(m.map_w);
    w.u32(m.map_h);
    w.u8(m.fog ? 1 : 0);
    w.u8(m.frame_skip);
    w.u64(m.seed);
    encode_roster(w, m.roster);
  }
  void operator()(const State& m) const {
    detail::check_frame_encodable(m.frame);
    w.u32(m.frame.frame_number);
    detail::write_unit_group(w, m.frame.units_myself);
    detail::write_unit_group(w, m.frame.units_enemy);
  }
  void operator()(const Commands& m) const {
    if (m.commands.size() > kMaxCommands) {
      throw EncodeError("COMMANDS holds " + std::to_string(m.commands.size()) +
                        " commands; the cap is 1024");
    }
    w.u16(static_cast<std::uint16_t>(m.commands.size()));
    for (const auto& cmd : m.commands) {
      if (acting_unit(cmd) < 0) throw EncodeError("negative unit id in command");
      std::visit(
          [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Stop>) {
              w.u8(0);
              w.u32(static_cast<std::uint32_t>(c.unit));
              w.i32(0);
              w.i32(0);
            } else if constexpr (std::is_same_v<T, Move>) {
              w.u8(1);
              w.u32(static_cast<std::uint32_t>(c.unit));
              w.i32(c.x);
              w.i32(c.y);
            } else {
              w.u8(2);
              w.u32(static_cast<std::uint32_t>(c.unit));
              w.i32(c.target);
              w.i32(0);
            }
          },
          cmd);
    }
  }
  void operator()(const End& m) const {
    if (static_cast<std::uint8_t>(m.result) > 2) throw EncodeError("END result must be 0, 1 or 2");
    w.u8(static_cast<std::uint8_t>(m.result));
    w.u32(m.final_frame);
  }
  void operator()(const Restart&) const {}
  void operator()(const Quit&) const {}
  void operator()(const Error& m) const {
    w.u16(m.code);
    w.str(m.text);
  }
};

Commands decode_commands(ByteReader& r) {
  const std::size_t count_at = r.offset();
  const std::size_t count = r.u16();
  if (count > kMaxCommands) r.fail("command count exceeds 1024", count_at);
  constexpr std::size_t kCommandBytes = 13;
  r.expect_room(count, kCommandBytes, count_at, "command");
  Commands m;
  m.commands.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t at = r.offset();
    const std::uint8_t kind = r.u8();
    const std::uint32_t raw_unit = r.u32();
    const std::int32_t a = r.i32();
    const std::int32_t b = r.i32();
    if (raw_unit > static_cast<std::uint32_t>(std::numeric_limits<std::int32_t>::max())) {
      r.fail("command unit id out of range", at);
    }
    const auto unit = static_cast<UnitId>(raw_unit);
    switch (kind) {
    case 0:
      if (a != 0 || b != 0) r.fail("stop command with nonzero arguments", at);
      m.commands.emplace_back(Stop{unit});
      break;
    case 1: m.commands.emplace_back(Move{unit, a, b}); break;
    case 2:
      if (b != 0) r.fail("attack command with nonzero second argument", at);
      m.commands.emplace_back(Attack{unit, a});
      break;
    default: r.fail("unknown command kind " + std::to_string(kind), at);
    }
  }
  return m;
}

} // namespace

void encode_message(const Message& msg, Bytes& out) {
  const std::size_t start = out.size();
  try {
    ByteWriter w(out);
    w.u8(static_cast<std::uint8_t>(tag_of(msg)));
    std::visit(BodyEncoder{w}, msg);
  } catch (...) {
    out.resize(start);
    throw;
  }
}

Bytes encode_message(const Message& msg) {
  Bytes out;
  if (const auto* s = std::get_if<State>(&msg)) {
    out.reserve(state_payload_size(s->frame.units_myself.size() + s->frame.units_enemy.size()));
  }
  encode_message(msg, out);
  return out;
}

Message decode_message(std::span<const std::uint8_t> payload) {
  ByteReader r(payload);
  if (payload.empty()) r.fail("empty payload");
  const std::uint8_t tag = r.u8();
  Message msg;
  switch (static_cast<MessageTag>(tag)) {
  case MessageTag::Hello: {
    Hello m;
    m.proto_version = r.u16();
    m.client_name = r.str();
    m.requested_role = r.u8();
    msg = std::move(m);
    break;
  }
  case MessageTag::Setup: {
    Setup m;
    m.player_id = r.u8();
    if (m.player_id > 1) r.fail("player id must be 0 or 1", r.offset() - 1);
    m.map_w = r.u32();
    m.map_h = r.u32();
    const std::uint8_t fog = r.u8();
    if (fog > 1) r.fail("fog flag must be 0 or 1", r.offset() - 1);
    m.fog = fog == 1;
    m.frame_skip = r.u8();
    if (m.frame_skip == 0) r.fail("frame_skip must be >= 1", r.offset() - 1);
    m.seed = r.u64();
    m.roster = decode_roster(r);
    msg = std::move(m);
    break;
  }
  case MessageTag::State: {
    State m;
    m.frame.frame_number = r.u32();
    m.frame.units_myself = detail::read_unit_group(r, false, nullptr);
    m.frame.units_enemy = detail::read_unit_group(r, true, &m.frame.units_myself);
    msg = std::move(m);
    break;
  }
  case MessageTag::Commands: msg = decode_commands(r); break;
  case MessageTag::End: {
    End m;
    const std::uint8_t result = r.u8();
    if (result > 2) r.fail("END result must be 0, 1 or 2", r.offset() - 1);
    m.result = static_cast<GameResult>(result);
    m.final_frame = r.u32();
    msg = m;
    break;
  }
  case MessageTag::Restart: msg = Restart{}; break;
  case MessageTag::Quit: msg = Quit{}; break;
  case MessageTag::Error: {
    Error m;
    m.code = r.u16();
    m.text = r.str();
    msg = std::move(m);
    break;
  }
  default: {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string hex = "0x";
    hex += kHex[tag >> 4];
    hex += kHex[tag & 0xF];
    r.fail("unknown message tag " + hex, 0);
  }
  }
  r.expect_end();
  return msg;
}

} // namespace skirmish
