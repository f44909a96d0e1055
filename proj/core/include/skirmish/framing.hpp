#pragma once

#include "skirmish/codec.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace skirmish {

inline constexpr std::size_t kMaxFrameBytes = 16u * 1024u * 1024u;
inline constexpr std::size_t kFrameHeaderBytes = 4;

/// Sequential source of bytes. `read_some` returns 0 only at end of stream.
class ByteSource {
public:
  virtual ~ByteSource() = default;
  virtual std::size_t read_some(std::span<std::uint8_t> into) = 0;
};

/// ByteSource over an in-memory buffer; tracks how far it has read.
class SpanSource final : public ByteSource {
public:
  explicit SpanSource(std::span<const std::uint8_t> data) noexcept : data_(data) {}
  std::size_t read_some(std::span<std::uint8_t> into) override;
  std::size_t position() const noexcept { return pos_; }

private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

/// 4-byte little-endian length followed by the payload. Throws OversizeError past 16 MiB.
Bytes write_framed(std::span<const std::uint8_t> payload);
void append_framed(std::span<const std::uint8_t> payload, Bytes& out);

/// Reads one framed payload. Returns nullopt if the source is exhausted exactly at a
/// frame boundary; throws TruncatedError mid-frame and OversizeError for lengths past the cap.
std::optional<Bytes> try_read_framed(ByteSource& source);
/// As try_read_framed, but end of stream is always a TruncatedError.
Bytes read_framed(ByteSource& source);

} // namespace skirmish
