#pragma once

#include "skirmish/codec.hpp"
#include "skirmish/engine.hpp"
#include "skirmish/game_config.hpp"
#include "skirmish/net.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace skirmish {

enum class ServerMode { Controlled, Attached };
enum class OpponentKind { BuiltinIdle, BuiltinAttackClosest, Client };

const char* mode_name(ServerMode mode) noexcept;
const char* opponent_name(OpponentKind kind) noexcept;

struct ServerConfig {
  ServerMode mode = ServerMode::Controlled;
  Endpoint endpoint;
  GameConfig game;
  OpponentKind opponent = OpponentKind::BuiltinIdle;
  std::chrono::milliseconds handshake_timeout{10000};
  /// Controlled mode: stop accepting after this many matches have started (unbounded when empty).
  std::optional<std::uint64_t> max_matches;
};

/// One connected client after a successful handshake.
struct Session {
  Connection* connection = nullptr;
  PlayerId player_id = 0;
  std::uint16_t version = kProtocolVersion;
  std::uint8_t frame_skip = 1;
};

/// Handshake failed; the client has already been sent ERROR (when applicable) and closed.
class HandshakeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

Setup make_setup(const GameConfig& game, PlayerId player, std::uint64_t seed);

/// Reads HELLO and answers with SETUP. Wrong version: ERROR(1); anything other than
/// a well-formed HELLO: ERROR(2); silence past `timeout`: closed without reply.
Session handshake(Connection& conn, const Setup& setup, std::chrono::milliseconds timeout);

struct SessionReport {
  PlayerId player_id = 0;
  GameResult result = GameResult::Draw;
  std::uint64_t states_sent = 0;
  std::uint64_t commands_received = 0;
  std::uint64_t max_outstanding = 0; // STATEs sent minus COMMANDS received, peak
  std::uint64_t rejected_commands = 0;
  bool disconnected = false;
  bool quit = false;
};

struct MatchReport {
  std::uint64_t match_index = 0;
  std::uint64_t seed = 0;
  MatchOutcome outcome;
  bool aborted = false;
  std::string abort_reason;
  std::vector<SessionReport> sessions;
};

struct MatchOptions {
  ServerMode mode = ServerMode::Controlled;
  /// Plays player 1 when only one client session is present.
  OpponentKind builtin = OpponentKind::BuiltinIdle;
  /// Sees the final report before any END goes out, so whoever reads an END can
  /// rely on the report already being filed.
  std::function<void(const MatchReport&)> before_end;
};

/// Lockstep loop: send each client its STATE, wait for exactly one COMMANDS from each,
/// apply, step frame_skip ticks; finally send every client its own END.
MatchReport run_match(std::span<Session> sessions, World& world, const MatchOptions& options);

/// Hosts matches on one endpoint. Binding happens in the constructor, so an endpoint
/// that is in use fails there with NetError.
class Server {
public:
  explicit Server(ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  const Endpoint& endpoint() const noexcept { return listener_.endpoint(); }

  /// Serves until stop(), until max_matches matches have finished, or (attached mode)
  /// until the client sends QUIT.
  void run();
  /// Safe from any thread; wakes blocked I/O.
  void stop();

  /// Called from match threads after each match.
  void on_match_end(std::function<void(const MatchReport&)> callback);
  std::vector<MatchReport> reports() const;

private:
  void serve_controlled();
  void serve_attached();
  bool run_attached_session(Connection& conn);
  void finish_match(MatchReport report);
  void track(Connection* conn);
  void untrack(Connection* conn);
  bool stopping() const noexcept { return stopping_.load(); }

  ServerConfig config_;
  Listener listener_;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> next_match_{0};

  mutable std::mutex mutex_;
  std::set<Connection*> live_;
  std::vector<MatchReport> reports_;
  std::function<void(const MatchReport&)> callback_;
  struct MatchThread {
    std::shared_ptr<std::atomic<bool>> done;
    std::jthread thread;
  };
  std::vector<MatchThread> match_threads_;
};

} // namespace skirmish
