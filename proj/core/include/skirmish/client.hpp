#pragma once

#include "skirmish/codec.hpp"
#include "skirmish/command.hpp"
#include "skirmish/net.hpp"

#include <chrono>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace skirmish {

/// Could not establish or keep a session with the server.
class ConnectionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The server answered with an ERROR message.
class ServerError : public ConnectionError {
public:
  ServerError(std::uint16_t code, const std::string& text)
      : ConnectionError("server error " + std::to_string(code) + ": " + text), code_(code) {}
  std::uint16_t code() const noexcept { return code_; }

private:
  std::uint16_t code_;
};

struct ClientState {
  Setup setup;
  std::optional<Frame> latest_frame;
  bool game_ended = false;
  std::optional<GameResult> last_result;
  std::uint32_t final_frame = 0;
};

struct ClientOptions {
  std::string name = "skirmish-client";
  std::uint8_t requested_role = 0;
  std::uint16_t proto_version = kProtocolVersion;
  /// Applies to connect only.
  std::chrono::milliseconds handshake_timeout{10000};
  /// Zero blocks forever.
  std::chrono::milliseconds receive_timeout{0};
};

/// Agent-side session. receive() and send_commands() must strictly alternate; the
/// handle raises UsageError instead of putting an out-of-turn message on the wire.
class Client {
public:
  /// Observes every payload crossing the connection (true = sent by this client).
  using Tap = std::function<void(bool outgoing, std::span<const std::uint8_t> payload)>;

  /// Sends HELLO and waits for SETUP. Throws ConnectionError (ServerError for ERROR replies).
  static Client connect(const Endpoint& endpoint, ClientOptions options = {});

  Client(Client&&) noexcept = default;
  Client& operator=(Client&&) noexcept = default;

  const ClientState& state() const noexcept { return state_; }
  PlayerId player_id() const noexcept { return state_.setup.player_id; }

  /// Blocks for the next STATE or END.
  const ClientState& receive();
  /// Answers the last STATE. Throws EncodeError past 1024 commands.
  void send_commands(std::span<const Command> cmds);

  /// After END on an attached-mode server: request the next match on this connection.
  void restart();
  /// Ask the server to end the session and close the connection.
  void quit();

  void set_tap(Tap tap) { tap_ = std::move(tap); }
  void set_receive_timeout(std::chrono::milliseconds timeout) { conn_.set_receive_timeout(timeout); }
  bool connected() const noexcept { return conn_.is_open(); }

private:
  Client() = default;
  Message receive_message();
  void send_message(const Message& msg);

  Connection conn_;
  ClientState state_;
  bool awaiting_commands_ = false;
  Tap tap_;
};

} // namespace skirmish
