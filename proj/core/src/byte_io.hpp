#pragma once

#include "skirmish/codec.hpp"
#include "skirmish/errors.hpp"

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>

namespace skirmish::detail {

/// Little-endian appender.
class ByteWriter {
public:
  explicit ByteWriter(Bytes& out) noexcept : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void i32(std::int32_t v) { put(static_cast<std::uint32_t>(v), 4); }
  void str(std::string_view s) {
    if (s.size() > 0xFFFF) throw EncodeError("string longer than 65535 bytes");
    u16(static_cast<std::uint16_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  std::size_t size() const noexcept { return out_.size(); }

private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  Bytes& out_;
};

/// Bounds-checked little-endian cursor; every failure is a DecodeError at the current offset.
class ByteReader {
public:
  explicit ByteReader(std::span<const std::uint8_t> data, std::size_t base_offset = 0) noexcept
      : data_(data), base_(base_offset) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1, "u8")); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2, "u16")); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4, "u32")); }
  std::uint64_t u64() { return get(8, "u64"); }
  std::int32_t i32() { return static_cast<std::int32_t>(static_cast<std::uint32_t>(get(4, "i32"))); }
  std::string str() {
    const std::size_t at = offset();
    const std::size_t n = u16();
    if (remaining() < n) fail("string length " + std::to_string(n) + " exceeds payload", at);
    std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  std::size_t offset() const noexcept { return base_ + pos_; }
  bool done() const noexcept { return pos_ == data_.size(); }

  void expect_end() const {
    if (!done()) fail(std::to_string(remaining()) + " trailing bytes", offset());
  }
  /// Throws unless `count` records of `each` bytes fit in the remaining payload.
  void expect_room(std::size_t count, std::size_t each, std::size_t count_offset,
                   const char* what) const {
    if (remaining() / each < count) {
      fail(std::string(what) + " count " + std::to_string(count) +
               " inconsistent with payload length",
           count_offset);
    }
  }
  [[noreturn]] void fail(const std::string& what) const { fail(what, offset()); }
  [[noreturn]] static void fail(const std::string& what, std::size_t at) {
    throw DecodeError(what, at);
  }

private:
  std::uint64_t get(std::size_t n, const char* what) {
    if (remaining() < n) fail(std::string("payload ends inside ") + what);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) v |= std::uint64_t{data_[pos_ + i]} << (8 * i);
    pos_ += n;
    return v;
  }

  std::span<const std::uint8_t> data_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

/// Shared by STATE payloads and replay deltas.
void write_unit_group(ByteWriter& w, const UnitMap& group);
UnitMap read_unit_group(ByteReader& r, bool enemy, const UnitMap* other_group);
void check_frame_encodable(const Frame& frame);

} // namespace skirmish::detail
