#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skirmish {

/// Base for malformed or unexpected bytes on the wire or on disk.
class ProtocolError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Payload could not be decoded. `offset()` is the byte index where decoding stopped.
class DecodeError : public ProtocolError {
public:
  DecodeError(const std::string& what, std::size_t offset)
      : ProtocolError(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// A message violates its own invariants and cannot be encoded.
class EncodeError : public ProtocolError {
public:
  using ProtocolError::ProtocolError;
};

/// The byte source ended before a complete framed message was read.
class TruncatedError : public ProtocolError {
public:
  using ProtocolError::ProtocolError;
};

/// A frame header announced more than the message size cap.
class OversizeError : public ProtocolError {
public:
  using ProtocolError::ProtocolError;
};

/// Bad scenario, roster or server configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operation called in a state where it is not allowed (e.g. stepping a finished world).
class UsageError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace skirmish
