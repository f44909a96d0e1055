#include "skirmish/delta.hpp"

#include "byte_io.hpp"

#include <bit>

namespace skirmish {

using detail::ByteReader;
using detail::ByteWriter;

namespace {

GroupDelta diff_group(const UnitMap& prev, const UnitMap& next) {
  GroupDelta d;
  for (const auto& [id, unit] : prev) {
    if (!next.contains(id)) d.removed.push_back(id);
  }
  for (const auto& [id, unit] : next) {
    const UnitFields now = unit_fields(unit);
    auto it = prev.find(id);
    if (it == prev.end()) {
      d.changed.push_back({id, kAllFieldsMask, {now.begin(), now.end()}});
      continue;
    }
    const UnitFields before = unit_fields(it->second);
    UnitChange change{id, 0, {}};
    for (std::size_t f = 0; f < kUnitFieldCount; ++f) {
      if (before[f] != now[f]) {
        change.mask |= 1u << f;
        change.values.push_back(now[f]);
      }
    }
    if (change.mask != 0) d.changed.push_back(std::move(change));
  }
  return d;
}

void apply_group(UnitMap& group, const GroupDelta& d, bool enemy) {
  for (UnitId id : d.removed) {
    if (group.erase(id) == 0) {
      throw DeltaError("delta removes unit " + std::to_string(id) + " absent from base frame");
    }
  }
  for (const auto& change : d.changed) {
    if (change.mask == 0 || (change.mask & ~kAllFieldsMask) != 0 ||
        static_cast<std::size_t>(std::popcount(change.mask)) != change.values.size()) {
      throw DeltaError("malformed field mask for unit " + std::to_string(change.id));
    }
    UnitFields fields{};
    auto it = group.find(change.id);
    if (it != group.end()) {
      fields = unit_fields(it->second);
    } else if (change.mask != kAllFieldsMask) {
      throw DeltaError("delta updates unit " + std::to_string(change.id) +
                       " absent from base frame");
    }
    std::size_t v = 0;
    for (std::size_t f = 0; f < kUnitFieldCount; ++f) {
      if (change.mask & (1u << f)) fields[f] = change.values[v++];
    }
    UnitState unit;
    if (!unit_from_fields(change.id, fields, enemy, unit)) {
      throw DeltaError("unit " + std::to_string(change.id) + ": idle flag must be 0 or 1");
    }
    group.insert_or_assign(change.id, unit);
  }
}

void write_group_removed(ByteWriter& w, const GroupDelta& d) {
  if (d.removed.size() > 0xFFFF) throw EncodeError("too many removed units in delta");
  w.u16(static_cast<std::uint16_t>(d.removed.size()));
  for (UnitId id : d.removed) w.u32(static_cast<std::uint32_t>(id));
}

void write_group_changed(ByteWriter& w, const GroupDelta& d) {
  if (d.changed.size() > 0xFFFF) throw EncodeError("too many changed units in delta");
  w.u16(static_cast<std::uint16_t>(d.changed.size()));
  for (const auto& c : d.changed) {
    w.u32(static_cast<std::uint32_t>(c.id));
    w.u32(c.mask);
    for (std::int32_t v : c.values) w.i32(v);
  }
}

UnitId read_id(ByteReader& r, std::int64_t& prev) {
  const std::size_t at = r.offset();
  const std::uint32_t raw = r.u32();
  if (raw > 0x7FFFFFFFu) r.fail("unit id out of range", at);
  const auto id = static_cast<UnitId>(raw);
  if (id <= prev) r.fail("unit ids not strictly ascending", at);
  prev = id;
  return id;
}

std::vector<UnitId> read_removed(ByteReader& r) {
  const std::size_t count_at = r.offset();
  const std::size_t count = r.u16();
  r.expect_room(count, 4, count_at, "removed unit");
  std::vector<UnitId> ids;
  ids.reserve(count);
  std::int64_t prev = -1;
  for (std::size_t i = 0; i < count; ++i) ids.push_back(read_id(r, prev));
  return ids;
}

std::vector<UnitChange> read_changed(ByteReader& r) {
  const std::size_t count_at = r.offset();
  const std::size_t count = r.u16();
  r.expect_room(count, 8, count_at, "changed unit");
  std::vector<UnitChange> out;
  out.reserve(count);
  std::int64_t prev = -1;
  for (std::size_t i = 0; i < count; ++i) {
    UnitChange c;
    c.id = read_id(r, prev);
    const std::size_t mask_at = r.offset();
    c.mask = r.u32();
    if (c.mask == 0 || (c.mask & ~kAllFieldsMask) != 0) r.fail("invalid field mask", mask_at);
    const auto n = static_cast<std::size_t>(std::popcount(c.mask));
    r.expect_room(n, 4, mask_at, "field");
    c.values.reserve(n);
    for (std::size_t f = 0; f < n; ++f) c.values.push_back(r.i32());
    out.push_back(std::move(c));
  }
  return out;
}

} // namespace

FrameDelta delta_encode(const Frame& prev, const Frame& next) {
  if (prev.frame_number >= next.frame_number) {
    throw UsageError("delta_encode needs prev.frame_number < next.frame_number");
  }
  FrameDelta d;
  d.base_frame = prev.frame_number;
  d.new_frame = next.frame_number;
  d.myself = diff_group(prev.units_myself, next.units_myself);
  d.enemy = diff_group(prev.units_enemy, next.units_enemy);
  return d;
}

Frame delta_apply(const Frame& prev, const FrameDelta& delta) {
  if (delta.base_frame != prev.frame_number) {
    throw DeltaError("delta base frame " + std::to_string(delta.base_frame) +
                     " does not match frame " + std::to_string(prev.frame_number));
  }
  if (delta.new_frame <= delta.base_frame) throw DeltaError("delta does not advance the frame");
  Frame next = prev;
  next.frame_number = delta.new_frame;
  apply_group(next.units_myself, delta.myself, false);
  apply_group(next.units_enemy, delta.enemy, true);
  for (const auto& [id, unit] : next.units_enemy) {
    if (next.units_myself.contains(id)) {
      throw DeltaError("unit " + std::to_string(id) + " ends up in both groups");
    }
  }
  return next;
}

void encode_delta(const FrameDelta& d, Bytes& out) {
  ByteWriter w(out);
  w.u8(static_cast<std::uint8_t>(MessageTag::Delta));
  w.u32(d.base_frame);
  w.u32(d.new_frame);
  write_group_removed(w, d.myself);
  write_group_removed(w, d.enemy);
  write_group_changed(w, d.myself);
  write_group_changed(w, d.enemy);
}

Bytes encode_delta(const FrameDelta& d) {
  Bytes out;
  encode_delta(d, out);
  return out;
}

FrameDelta decode_delta(std::span<const std::uint8_t> payload, std::size_t base_offset) {
  ByteReader r(payload, base_offset);
  if (payload.empty()) r.fail("empty delta record");
  if (r.u8() != static_cast<std::uint8_t>(MessageTag::Delta)) r.fail("not a delta record", base_offset);
  FrameDelta d;
  d.base_frame = r.u32();
  d.new_frame = r.u32();
  d.myself.removed = read_removed(r);
  d.enemy.removed = read_removed(r);
  d.myself.changed = read_changed(r);
  d.enemy.changed = read_changed(r);
  r.expect_end();
  return d;
}

} // namespace skirmish
