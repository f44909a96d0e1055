#pragma once

#include "skirmish/codec.hpp"
#include "skirmish/errors.hpp"
#include "skirmish/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace skirmish {

/// A delta does not fit the frame it is applied to.
class DeltaError : public ProtocolError {
public:
  using ProtocolError::ProtocolError;
};

inline constexpr std::uint32_t kAllFieldsMask = (1u << kUnitFieldCount) - 1;

/// Changed fields of one unit; bit i of `mask` selects UnitField i. A full mask
/// introduces a unit that need not exist in the base frame.
struct UnitChange {
  UnitId id = 0;
  std::uint32_t mask = 0;
  std::vector<std::int32_t> values; // one per set bit, in field order
  friend bool operator==(const UnitChange&, const UnitChange&) = default;
};

struct GroupDelta {
  std::vector<UnitId> removed;      // ascending
  std::vector<UnitChange> changed;  // ascending by id
  friend bool operator==(const GroupDelta&, const GroupDelta&) = default;
};

struct FrameDelta {
  std::uint32_t base_frame = 0;
  std::uint32_t new_frame = 0;
  GroupDelta myself;
  GroupDelta enemy;
  friend bool operator==(const FrameDelta&, const FrameDelta&) = default;
};

/// Minimal delta from `prev` to `next`. Throws UsageError unless prev precedes next.
FrameDelta delta_encode(const Frame& prev, const Frame& next);

/// Throws DeltaError on a base mismatch or a delta that references units `prev` lacks.
Frame delta_apply(const Frame& prev, const FrameDelta& delta);

/// Tag 0x09, base u32, new u32, removed (myself, enemy), changed (myself, enemy).
Bytes encode_delta(const FrameDelta& delta);
void encode_delta(const FrameDelta& delta, Bytes& out);
/// Throws DecodeError; `base_offset` is added to reported offsets.
FrameDelta decode_delta(std::span<const std::uint8_t> payload, std::size_t base_offset = 0);

} // namespace skirmish
