#pragma once

#include "skirmish/codec.hpp"
#include "skirmish/framing.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace skirmish {

/// Transport-level failure: refused, reset, timed out.
class NetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class TimeoutError : public NetError {
public:
  using NetError::NetError;
};

/// Either a TCP `host:port` or a local stream socket path (the "pipe" transport).
struct Endpoint {
  enum class Kind { Tcp, Local };
  Kind kind = Kind::Tcp;
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  std::string path;

  static Endpoint tcp(std::string host, std::uint16_t port);
  static Endpoint local(std::string path);
  /// Accepts `host:port`, `tcp://host:port`, `unix:/path` or a bare path containing '/'.
  static Endpoint parse(const std::string& text);
  std::string to_string() const;
};

/// Owned stream socket carrying framed messages.
class Connection final : public ByteSource {
public:
  Connection() = default;
  explicit Connection(int fd) noexcept : fd_(fd) {}
  Connection(Connection&& other) noexcept;
  Connection& operator=(Connection&& other) noexcept;
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;
  ~Connection() override;

  /// Throws NetError when the endpoint cannot be reached.
  static Connection open(const Endpoint& endpoint);

  bool is_open() const noexcept { return fd_ >= 0; }
  int native_handle() const noexcept { return fd_; }

  void send_payload(std::span<const std::uint8_t> payload);
  void send(const Message& msg);
  /// nullopt when the peer closed cleanly between messages.
  std::optional<Bytes> try_receive_payload();
  Bytes receive_payload();
  Message receive();

  /// Zero or negative disables the timeout. Expiry raises TimeoutError from receive calls.
  void set_receive_timeout(std::chrono::milliseconds timeout);
  /// Wakes any thread blocked on this connection; further I/O fails.
  void shutdown() noexcept;
  void close() noexcept;

  std::size_t read_some(std::span<std::uint8_t> into) override;

  std::uint64_t messages_sent() const noexcept { return sent_; }
  std::uint64_t messages_received() const noexcept { return received_; }

private:
  bool fill();

  int fd_ = -1;
  Bytes out_;
  std::uint8_t in_[16384];
  std::size_t in_pos_ = 0;
  std::size_t in_len_ = 0;
  std::uint64_t sent_ = 0;
  std::uint64_t received_ = 0;
};

/// Listening socket. For local endpoints a stale socket file is replaced.
class Listener {
public:
  /// Throws NetError if the endpoint is already in use.
  explicit Listener(const Endpoint& endpoint);
  Listener(Listener&&) noexcept;
  Listener& operator=(Listener&&) noexcept;
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;
  ~Listener();

  /// Bound endpoint; for TCP port 0 this carries the port the OS picked.
  const Endpoint& endpoint() const noexcept { return endpoint_; }

  /// Blocks for the next client; nullopt once shutdown() has been called.
  std::optional<Connection> accept();
  void shutdown() noexcept;

private:
  void open_wake_pipe();

  int fd_ = -1;
  int wake_[2] = {-1, -1};
  Endpoint endpoint_;
  bool unlink_on_close_ = false;
};

} // namespace skirmish
