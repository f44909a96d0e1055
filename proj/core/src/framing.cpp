#include "skirmish/framing.hpp"

#include "skirmish/errors.hpp"

#include <algorithm>
#include <cstring>

namespace skirmish {

std::size_t SpanSource::read_some(std::span<std::uint8_t> into) {
  const std::size_t n = std::min(into.size(), data_.size() - pos_);
  std::memcpy(into.data(), data_.data() + pos_, n);
  pos_ += n;
  return n;
}

void append_framed(std::span<const std::uint8_t> payload, Bytes& out) {
  if (payload.size() > kMaxFrameBytes) {
    throw OversizeError("payload of " + std::to_string(payload.size()) +
                        " bytes exceeds the 16 MiB frame cap");
  }
  const auto n = static_cast<std::uint32_t>(payload.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
  out.insert(out.end(), payload.begin(), payload.end());
}

Bytes write_framed(std::span<const std::uint8_t> payload) {
  Bytes out;
  out.reserve(kFrameHeaderBytes + payload.size());
  append_framed(payload, out);
  return out;
}

namespace {

// Fills `into` completely; returns how many bytes were read before end of stream.
std::size_t read_fully(ByteSource& source, std::span<std::uint8_t> into) {
  std::size_t got = 0;
  while (got < into.size()) {
    const std::size_t n = source.read_some(into.subspan(got));
    if (n == 0) break;
    got += n;
  }
  return got;
}

} // namespace

std::optional<Bytes> try_read_framed(ByteSource& source) {
  std::uint8_t header[kFrameHeaderBytes];
  const std::size_t got = read_fully(source, header);
  if (got == 0) return std::nullopt;
  if (got < kFrameHeaderBytes) throw TruncatedError("stream ended inside a frame header");
  const std::uint32_t n = std::uint32_t{header[0]} | std::uint32_t{header[1]} << 8 |
                          std::uint32_t{header[2]} << 16 | std::uint32_t{header[3]} << 24;
  if (n > kMaxFrameBytes) {
    throw OversizeError("declared frame length " + std::to_string(n) + " exceeds the 16 MiB cap");
  }
  Bytes payload(n);
  if (read_fully(source, payload) < n) {
    throw TruncatedError("stream ended inside a " + std::to_string(n) + "-byte frame");
  }
  return payload;
}

Bytes read_framed(ByteSource& source) {
  auto payload = try_read_framed(source);
  if (!payload) throw TruncatedError("stream ended before a frame header");
  return std::move(*payload);
}

} // namespace skirmish
