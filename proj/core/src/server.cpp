#include "skirmish/server.hpp"

#include "skirmish/errors.hpp"
#include "skirmish/helpers.hpp"
#include "skirmish/perspective.hpp"

#include <algorithm>
#include <condition_variable>

namespace skirmish {

const char* mode_name(ServerMode mode) noexcept {
  return mode == ServerMode::Controlled ? "controlled" : "attached";
}

const char* opponent_name(OpponentKind kind) noexcept {
  switch (kind) {
  case OpponentKind::BuiltinIdle: return "builtin_idle";
  case OpponentKind::BuiltinAttackClosest: return "builtin_attack_closest";
  case OpponentKind::Client: return "client";
  }
  return "unknown";
}

Setup make_setup(const GameConfig& game, PlayerId player, std::uint64_t seed) {
  Setup s;
  s.player_id = static_cast<std::uint8_t>(player);
  s.map_w = static_cast<std::uint32_t>(game.map_w);
  s.map_h = static_cast<std::uint32_t>(game.map_h);
  s.fog = game.fog;
  s.frame_skip = static_cast<std::uint8_t>(game.frame_skip);
  s.seed = seed;
  s.roster = game.roster;
  return s;
}

namespace {

void send_quietly(Connection& conn, const Message& msg) noexcept {
  try {
    conn.send(msg);
  } catch (const std::exception&) {
    // peer gone; nothing else to tell it
  }
}

[[noreturn]] void reject(Connection& conn, ErrorCode code, const std::string& text) {
  send_quietly(conn, Error{static_cast<std::uint16_t>(code), text});
  conn.close();
  throw HandshakeError(text);
}

GameResult result_for(const MatchOutcome& outcome, PlayerId player) noexcept {
  if (!outcome.winner) return GameResult::Draw;
  return *outcome.winner == player ? GameResult::Win : GameResult::Loss;
}

} // namespace

Session handshake(Connection& conn, const Setup& setup, std::chrono::milliseconds timeout) {
  conn.set_receive_timeout(timeout);
  std::optional<Bytes> payload;
  try {
    payload = conn.try_receive_payload();
  } catch (const TimeoutError&) {
    conn.close();
    throw HandshakeError("handshake timed out");
  } catch (const NetError& e) {
    conn.close();
    throw HandshakeError(e.what());
  } catch (const ProtocolError& e) {
    reject(conn, ErrorCode::Malformed, e.what());
  }
  if (!payload) {
    conn.close();
    throw HandshakeError("client closed before HELLO");
  }
  Message msg;
  try {
    msg = decode_message(*payload);
  } catch (const DecodeError& e) {
    reject(conn, ErrorCode::Malformed, std::string("malformed HELLO: ") + e.what());
  }
  const auto* hello = std::get_if<Hello>(&msg);
  if (hello == nullptr) {
    reject(conn, ErrorCode::Malformed,
           std::string("expected HELLO, got ") + tag_name(tag_of(msg)));
  }
  if (hello->proto_version != kProtocolVersion) {
    reject(conn, ErrorCode::VersionMismatch,
           "unsupported protocol version " + std::to_string(hello->proto_version) +
               "; server speaks " + std::to_string(kProtocolVersion));
  }
  try {
    conn.send(setup);
  } catch (const NetError& e) {
    conn.close();
    throw HandshakeError(e.what());
  }
  conn.set_receive_timeout(std::chrono::milliseconds{0});
  return Session{&conn, setup.player_id, hello->proto_version, setup.frame_skip};
}

MatchReport run_match(std::span<Session> sessions, World& world, const MatchOptions& options) {
  if (world.result) throw UsageError("run_match on a finished world");
  MatchReport report;
  report.sessions.resize(sessions.size());
  for (std::size_t i = 0; i < sessions.size(); ++i) report.sessions[i].player_id = sessions[i].player_id;

  std::vector<std::size_t> by_player(sessions.size());
  for (std::size_t i = 0; i < by_player.size(); ++i) by_player[i] = i;
  std::sort(by_player.begin(), by_player.end(),
            [&](std::size_t a, std::size_t b) { return sessions[a].player_id < sessions[b].player_id; });

  const bool builtin = sessions.size() == 1;
  const PlayerId builtin_player = builtin ? 1 - sessions[0].player_id : -1;
  const auto frame_skip = static_cast<std::uint32_t>(std::max<std::uint8_t>(1, sessions.empty() ? 1 : sessions[0].frame_skip));

  std::optional<std::size_t> offender;
  Bytes payload;
  std::vector<Commands> received(sessions.size());
  std::vector<Command> builtin_cmds;

  const auto abort_match = [&](std::size_t who, std::string reason) {
    offender = who;
    report.aborted = true;
    report.abort_reason = std::move(reason);
  };

  while (!world.result && !offender) {
    for (std::size_t i = 0; i < sessions.size() && !offender; ++i) {
      payload.clear();
      encode_message(State{build_player_frame(world, sessions[i].player_id)}, payload);
      try {
        sessions[i].connection->send_payload(payload);
      } catch (const NetError& e) {
        report.sessions[i].disconnected = true;
        abort_match(i, e.what());
        break;
      }
      auto& s = report.sessions[i];
      ++s.states_sent;
      s.max_outstanding = std::max(s.max_outstanding, s.states_sent - s.commands_received);
    }
    if (offender) break;

    builtin_cmds.clear();
    if (builtin && options.builtin == OpponentKind::BuiltinAttackClosest) {
      builtin_cmds = attack_closest(build_player_frame(world, builtin_player), world.roster);
    }

    for (std::size_t i = 0; i < sessions.size() && !offender; ++i) {
      Connection& conn = *sessions[i].connection;
      for (;;) {
        std::optional<Bytes> in;
        try {
          in = conn.try_receive_payload();
        } catch (const NetError& e) {
          report.sessions[i].disconnected = true;
          abort_match(i, e.what());
          break;
        } catch (const ProtocolError& e) {
          send_quietly(conn, Error{static_cast<std::uint16_t>(ErrorCode::Malformed), e.what()});
          abort_match(i, e.what());
          break;
        }
        if (!in) {
          report.sessions[i].disconnected = true;
          abort_match(i, "client disconnected");
          break;
        }
        Message msg;
        try {
          msg = decode_message(*in);
        } catch (const DecodeError& e) {
          send_quietly(conn, Error{static_cast<std::uint16_t>(ErrorCode::Malformed), e.what()});
          abort_match(i, e.what());
          break;
        }
        if (auto* cmds = std::get_if<Commands>(&msg)) {
          received[i] = std::move(*cmds);
          ++report.sessions[i].commands_received;
          break;
        }
        if (std::holds_alternative<Restart>(msg)) {
          send_quietly(conn, Error{static_cast<std::uint16_t>(ErrorCode::IllegalInMode),
                                   options.mode == ServerMode::Controlled
                                       ? "restart not supported in controlled mode"
                                       : "restart is only accepted after END"});
          continue;
        }
        if (std::holds_alternative<Quit>(msg)) {
          report.sessions[i].quit = true;
          abort_match(i, "client quit");
          break;
        }
        send_quietly(conn, Error{static_cast<std::uint16_t>(ErrorCode::Malformed),
                                 std::string("unexpected ") + tag_name(tag_of(msg)) +
                                     " during a match"});
        abort_match(i, std::string("unexpected ") + tag_name(tag_of(msg)));
        break;
      }
    }
    if (offender) break;

    for (std::size_t i : by_player) {
      const auto outcomes = apply_commands(world, sessions[i].player_id, received[i].commands);
      report.sessions[i].rejected_commands += static_cast<std::uint64_t>(
          std::count_if(outcomes.begin(), outcomes.end(), [](const auto& o) { return !o.accepted; }));
    }
    if (builtin) apply_commands(world, builtin_player, builtin_cmds);
    step(world, frame_skip);
  }

  if (offender) {
    const PlayerId loser = sessions[*offender].player_id;
    report.outcome = MatchOutcome{1 - loser, world.tick};
  } else {
    report.outcome = *world.result;
  }
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    report.sessions[i].result = result_for(report.outcome, sessions[i].player_id);
  }
  if (options.before_end) options.before_end(report);
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    if (offender && *offender == i) continue;
    send_quietly(*sessions[i].connection, End{report.sessions[i].result, report.outcome.final_frame});
  }
  return report;
}

Server::Server(ServerConfig config) : config_(std::move(config)), listener_(config_.endpoint) {
  check_game_config(config_.game);
  if (config_.mode == ServerMode::Attached && config_.opponent == OpponentKind::Client) {
    throw ConfigError("attached mode serves a single client; use a builtin opponent");
  }
}

Server::~Server() {
  stop();
  match_threads_.clear();
}

void Server::on_match_end(std::function<void(const MatchReport&)> callback) {
  std::lock_guard lock(mutex_);
  callback_ = std::move(callback);
}

std::vector<MatchReport> Server::reports() const {
  std::lock_guard lock(mutex_);
  return reports_;
}

void Server::stop() {
  stopping_ = true;
  listener_.shutdown();
  std::lock_guard lock(mutex_);
  for (auto* conn : live_) conn->shutdown();
}

void Server::track(Connection* conn) {
  std::lock_guard lock(mutex_);
  live_.insert(conn);
  if (stopping()) conn->shutdown();
}

void Server::untrack(Connection* conn) {
  std::lock_guard lock(mutex_);
  live_.erase(conn);
}

void Server::finish_match(MatchReport report) {
  std::function<void(const MatchReport&)> callback;
  {
    std::lock_guard lock(mutex_);
    reports_.push_back(report);
    callback = callback_;
  }
  if (callback) callback(report);
}

void Server::run() {
  if (config_.mode == ServerMode::Controlled) {
    serve_controlled();
  } else {
    serve_attached();
  }
  match_threads_.clear(); // joins
}

namespace {

struct OwnedSession {
  std::unique_ptr<Connection> connection;
  Session session;
};

} // namespace

void Server::serve_controlled() {
  const bool two_clients = config_.opponent == OpponentKind::Client;
  const std::uint64_t base_seed = config_.game.seed;

  const auto accept_one = [&](PlayerId player, std::uint64_t seed) -> std::optional<OwnedSession> {
    const Setup setup = make_setup(config_.game, player, seed);
    while (!stopping()) {
      auto conn = listener_.accept();
      if (!conn) return std::nullopt;
      OwnedSession owned{std::make_unique<Connection>(std::move(*conn)), {}};
      track(owned.connection.get());
      try {
        owned.session = handshake(*owned.connection, setup, config_.handshake_timeout);
        owned.session.connection = owned.connection.get();
        return owned;
      } catch (const HandshakeError&) {
        untrack(owned.connection.get());
      }
    }
    return std::nullopt;
  };

  while (!stopping()) {
    if (config_.max_matches && next_match_.load() >= *config_.max_matches) break;
    const std::uint64_t index = next_match_.load();
    const std::uint64_t seed = base_seed + index;

    std::vector<OwnedSession> group;
    auto first = accept_one(0, seed);
    if (!first) break;
    group.push_back(std::move(*first));
    if (two_clients) {
      auto second = accept_one(1, seed);
      if (!second) {
        send_quietly(*group[0].connection,
                     Error{static_cast<std::uint16_t>(ErrorCode::Internal), "server stopping"});
        untrack(group[0].connection.get());
        break;
      }
      group.push_back(std::move(*second));
    }
    next_match_.fetch_add(1);

    std::erase_if(match_threads_, [](const MatchThread& t) { return t.done->load(); });
    auto done = std::make_shared<std::atomic<bool>>(false);
    auto& slot = match_threads_.emplace_back();
    slot.done = done;
    slot.thread = std::jthread([this, group = std::move(group), index, seed, done]() mutable {
      GameConfig game = config_.game;
      game.seed = seed;
      std::vector<Session> sessions;
      for (const auto& g : group) sessions.push_back(g.session);
      World world = init_world(game);
      run_match(sessions, world,
                {ServerMode::Controlled, config_.opponent, [&](const MatchReport& r) {
                   MatchReport filed = r;
                   filed.match_index = index;
                   filed.seed = seed;
                   finish_match(std::move(filed));
                 }});
      for (auto& g : group) {
        untrack(g.connection.get());
        g.connection->close();
      }
      done->store(true);
    });
  }
}

void Server::serve_attached() {
  std::mutex m;
  std::condition_variable cv;
  std::unique_ptr<Connection> pending;
  bool busy = false;

  std::jthread acceptor([&] {
    while (!stopping()) {
      auto conn = listener_.accept();
      if (!conn) break;
      std::unique_lock lock(m);
      if (busy) {
        lock.unlock();
        send_quietly(*conn, Error{static_cast<std::uint16_t>(ErrorCode::IllegalInMode),
                                  "attached session already active"});
        conn->close();
        continue;
      }
      busy = true;
      pending = std::make_unique<Connection>(std::move(*conn));
      track(pending.get());
      cv.notify_all();
    }
    std::lock_guard lock(m);
    cv.notify_all();
  });

  for (;;) {
    std::unique_ptr<Connection> conn;
    {
      std::unique_lock lock(m);
      cv.wait(lock, [&] { return pending != nullptr || stopping(); });
      if (!pending) break;
      conn = std::move(pending);
    }
    const bool quit = run_attached_session(*conn);
    untrack(conn.get());
    conn->close();
    {
      std::lock_guard lock(m);
      busy = false;
    }
    if (quit) {
      stopping_ = true;
      listener_.shutdown();
      break;
    }
  }
  listener_.shutdown();
}

// True when the client asked the server to shut down.
bool Server::run_attached_session(Connection& conn) {
  const std::uint64_t base_seed = config_.game.seed;
  std::uint64_t index = next_match_.load();
  Session session;
  try {
    session = handshake(conn, make_setup(config_.game, 0, base_seed + index), config_.handshake_timeout);
  } catch (const HandshakeError&) {
    return false;
  }
  next_match_.fetch_add(1);

  for (;;) {
    GameConfig game = config_.game;
    game.seed = base_seed + index;
    World world = init_world(game);
    Session sessions[1] = {session};
    const MatchReport report =
        run_match(sessions, world, {ServerMode::Attached, config_.opponent, [&](const MatchReport& r) {
                    MatchReport filed = r;
                    filed.match_index = index;
                    filed.seed = game.seed;
                    finish_match(std::move(filed));
                  }});
    const SessionReport client = report.sessions[0];
    const bool aborted = report.aborted;
    if (client.quit) return true;
    if (aborted) return false;

    for (;;) {
      std::optional<Bytes> payload;
      try {
        payload = conn.try_receive_payload();
      } catch (const std::exception&) {
        return false;
      }
      if (!payload) return false;
      Message msg;
      try {
        msg = decode_message(*payload);
      } catch (const DecodeError& e) {
        send_quietly(conn, Error{static_cast<std::uint16_t>(ErrorCode::Malformed), e.what()});
        return false;
      }
      if (std::holds_alternative<Quit>(msg)) return true;
      if (std::holds_alternative<Restart>(msg)) {
        index = next_match_.fetch_add(1);
        try {
          conn.send(make_setup(config_.game, 0, base_seed + index));
        } catch (const NetError&) {
          return false;
        }
        break;
      }
      send_quietly(conn, Error{static_cast<std::uint16_t>(ErrorCode::IllegalInMode),
                               "only RESTART or QUIT are accepted after END"});
    }
  }
}

} // namespace skirmish
