#pragma once

#include "skirmish/command.hpp"
#include "skirmish/roster.hpp"
#include "skirmish/types.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace skirmish {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::uint16_t kProtocolVersion = 1;
inline constexpr std::size_t kMaxCommands = 1024;

enum class MessageTag : std::uint8_t {
  Hello = 0x01,
  Setup = 0x02,
  State = 0x03,
  Commands = 0x04,
  End = 0x05,
  Restart = 0x06,
  Quit = 0x07,
  Error = 0x08,
  Delta = 0x09, // replay files only
};

enum class GameResult : std::uint8_t { Loss = 0, Win = 1, Draw = 2 };

enum class ErrorCode : std::uint16_t {
  VersionMismatch = 1,
  Malformed = 2,
  IllegalInMode = 3,
  Internal = 4,
};

struct Hello {
  std::uint16_t proto_version = kProtocolVersion;
  std::string client_name;
  std::uint8_t requested_role = 0;
  friend bool operator==(const Hello&, const Hello&) = default;
};

struct Setup {
  std::uint8_t player_id = 0;
  std::uint32_t map_w = 0;
  std::uint32_t map_h = 0;
  bool fog = false;
  std::uint8_t frame_skip = 1;
  std::uint64_t seed = 0;
  Roster roster;
  friend bool operator==(const Setup&, const Setup&) = default;
};

struct State {
  Frame frame;
  friend bool operator==(const State&, const State&) = default;
};

struct Commands {
  std::vector<Command> commands;
  friend bool operator==(const Commands&, const Commands&) = default;
};

struct End {
  GameResult result = GameResult::Draw;
  std::uint32_t final_frame = 0;
  friend bool operator==(const End&, const End&) = default;
};

struct Restart {
  friend bool operator==(const Restart&, const Restart&) = default;
};

struct Quit {
  friend bool operator==(const Quit&, const Quit&) = default;
};

struct Error {
  std::uint16_t code = 0;
  std::string text;
  friend bool operator==(const Error&, const Error&) = default;
};

using Message = std::variant<Hello, Setup, State, Commands, End, Restart, Quit, Error>;

MessageTag tag_of(const Message& msg) noexcept;
const char* tag_name(MessageTag tag) noexcept;

/// Number of 32-bit fields serialized per unit after its id, and their canonical order.
inline constexpr std::size_t kUnitFieldCount = 20;
inline constexpr std::size_t kUnitRecordBytes = 4 + 4 * kUnitFieldCount;

enum class UnitField : std::uint8_t {
  Type, X, Y, Hp, Shield, Energy, Armor, Size, GwType, AwType,
  GwCd, AwCd, GwAttack, AwAttack, GwRange, AwRange, Idle, Target, TargetX, TargetY,
};

using UnitFields = std::array<std::int32_t, kUnitFieldCount>;

/// The 20 serialized fields of a unit, in wire order.
UnitFields unit_fields(const UnitState& unit) noexcept;
/// Inverse of unit_fields. Returns false if `idle` is not 0/1.
bool unit_from_fields(UnitId id, const UnitFields& fields, bool enemy, UnitState& out) noexcept;

/// Payload bytes (tag + body, no length prefix). Throws EncodeError on invariant violations.
Bytes encode_message(const Message& msg);
void encode_message(const Message& msg, Bytes& out);

/// Throws DecodeError naming the failing offset.
Message decode_message(std::span<const std::uint8_t> payload);

/// Exact size of a STATE payload holding `units` units.
constexpr std::size_t state_payload_size(std::size_t units) noexcept {
  return 1 + 4 + 2 + 2 + units * kUnitRecordBytes;
}

} // namespace skirmish
