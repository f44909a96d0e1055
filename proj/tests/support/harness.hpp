#pragma once

#include "skirmish/client.hpp"
#include "skirmish/helpers.hpp"
#include "skirmish/server.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <thread>
#include <unistd.h>

namespace skirmish::testing {

class TempDir {
public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("skirmish-test-" + std::to_string(::getpid()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

/// Server running on a background thread; stopped and joined on destruction.
class ServerThread {
public:
  explicit ServerThread(ServerConfig config)
      : server_(std::make_unique<Server>(std::move(config))),
        thread_([this] {
          server_->run();
          done_ = true;
        }) {}
  ~ServerThread() {
    server_->stop();
    if (thread_.joinable()) thread_.join();
  }
  ServerThread(const ServerThread&) = delete;
  ServerThread& operator=(const ServerThread&) = delete;

  Server& server() noexcept { return *server_; }
  const Endpoint& endpoint() const noexcept { return server_->endpoint(); }
  /// Waits for run() to return on its own (max_matches reached, QUIT received).
  bool wait_finished(std::chrono::milliseconds limit) {
    const auto deadline = std::chrono::steady_clock::now() + limit;
    while (std::chrono::steady_clock::now() < deadline) {
      if (finished()) return true;
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    return finished();
  }

private:
  bool finished() const noexcept { return done_.load(); }
  std::unique_ptr<Server> server_;
  std::atomic<bool> done_{false};
  std::thread thread_;
};

inline GameConfig duel_config() {
  GameConfig g;
  g.seed = 7;
  g.scenario = std::vector<Spawn>{{unit_types::kTrooper, 0, 100, 100},
                                  {unit_types::kTrooper, 1, 400, 300}};
  return g;
}

inline GameConfig mirror_config(std::uint64_t seed = 42, std::int32_t count = 5) {
  GameConfig g;
  g.seed = seed;
  g.scenario = RandomMirror{count, unit_types::kTrooper};
  return g;
}

inline ServerConfig controlled(GameConfig game, OpponentKind opponent = OpponentKind::BuiltinIdle,
                               std::optional<std::uint64_t> max_matches = std::nullopt) {
  ServerConfig c;
  c.mode = ServerMode::Controlled;
  c.endpoint = Endpoint::tcp("127.0.0.1", 0);
  c.game = std::move(game);
  c.opponent = opponent;
  c.max_matches = max_matches;
  return c;
}

using Policy = std::function<std::vector<Command>(const Frame&, const Roster&)>;

struct Transcript {
  PlayerId player = 0;
  Bytes setup;
  std::vector<Bytes> states;   // STATE payloads as received
  std::vector<Bytes> commands; // COMMANDS payloads as sent
  std::vector<Message> messages; // SETUP, STATEs, END
  End end;
};

/// Plays one match on an already connected client.
inline Transcript play(Client& client, const Policy& policy,
                       std::chrono::milliseconds delay = std::chrono::milliseconds(0)) {
  Transcript t;
  t.player = client.player_id();
  t.setup = encode_message(client.state().setup);
  t.messages.emplace_back(client.state().setup);
  client.set_tap([&](bool outgoing, std::span<const std::uint8_t> p) {
    if (p.empty()) return;
    if (!outgoing && p[0] == static_cast<std::uint8_t>(MessageTag::State)) {
      t.states.emplace_back(p.begin(), p.end());
    }
    if (outgoing && p[0] == static_cast<std::uint8_t>(MessageTag::Commands)) {
      t.commands.emplace_back(p.begin(), p.end());
    }
  });
  while (true) {
    const auto& st = client.receive();
    if (st.game_ended) break;
    t.messages.emplace_back(State{*st.latest_frame});
    auto cmds = policy(*st.latest_frame, st.setup.roster);
    if (delay.count() > 0) std::this_thread::sleep_for(delay);
    client.send_commands(cmds);
  }
  t.end = {*client.state().last_result, client.state().final_frame};
  t.messages.emplace_back(t.end);
  client.set_tap({});
  return t;
}

inline Transcript connect_and_play(const Endpoint& ep, const Policy& policy,
                                   std::chrono::milliseconds delay = std::chrono::milliseconds(0)) {
  auto client = Client::connect(ep);
  return play(client, policy, delay);
}

} // namespace skirmish::testing
