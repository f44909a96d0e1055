#include "cli.hpp"

#include "skirmish/client.hpp"
#include "skirmish/game_config.hpp"
#include "skirmish/helpers.hpp"
#include "skirmish/replay.hpp"
#include "skirmish/server.hpp"

#include <CLI11.hpp>

#include <map>
#include <numeric>
#include <ostream>

namespace skirmish::cli {

namespace {

const char* result_name(GameResult r) {
  switch (r) {
  case GameResult::Win: return "win";
  case GameResult::Loss: return "loss";
  case GameResult::Draw: return "draw";
  }
  return "?";
}

int exit_code_for(GameResult r) {
  switch (r) {
  case GameResult::Win: return kWin;
  case GameResult::Loss: return kLoss;
  case GameResult::Draw: return kDraw;
  }
  return kFailed;
}

GameConfig default_game() {
  GameConfig game;
  game.scenario = RandomMirror{5, unit_types::kTrooper};
  return game;
}

struct ServeArgs {
  std::string mode;
  std::string listen;
  std::string pipe;
  std::string config;
  std::string opponent = "idle";
  std::uint64_t matches = 0;
  std::uint32_t handshake_ms = 10000;
};

int cmd_serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
  ServerConfig config;
  config.mode = a.mode == "controlled" ? ServerMode::Controlled : ServerMode::Attached;
  static const std::map<std::string, OpponentKind> kOpponents = {
      {"idle", OpponentKind::BuiltinIdle},
      {"attack_closest", OpponentKind::BuiltinAttackClosest},
      {"client", OpponentKind::Client}};
  config.opponent = kOpponents.at(a.opponent);
  config.handshake_timeout = std::chrono::milliseconds(a.handshake_ms);
  if (a.matches > 0) config.max_matches = a.matches;
  try {
    config.endpoint = a.pipe.empty() ? Endpoint::parse(a.listen) : Endpoint::local(a.pipe);
    config.game = a.config.empty() ? default_game() : load_game_config(a.config);
  } catch (const std::exception& e) {
    err << "serve: " << e.what() << '\n';
    return kUsage;
  }

  try {
    Server server(config);
    server.on_match_end([&out](const MatchReport& r) {
      out << "match " << r.match_index << " seed " << r.seed << " final_frame "
          << r.outcome.final_frame;
      for (const auto& s : r.sessions) {
        out << " player" << s.player_id << '=' << result_name(s.result);
      }
      if (r.aborted) out << " aborted=\"" << r.abort_reason << '"';
      out << std::endl;
    });
    out << "serving " << mode_name(config.mode) << " on " << server.endpoint().to_string()
        << " opponent " << opponent_name(config.opponent) << std::endl;
    server.run();
  } catch (const std::exception& e) {
    err << "serve: " << e.what() << '\n';
    return kFailed;
  }
  return kOk;
}

struct BotArgs {
  std::string connect;
  std::string pipe;
  std::string policy = "attack_closest";
  std::string record;
  std::uint32_t keyframe_interval = kDefaultKeyframeInterval;
  std::uint32_t games = 1;
  bool attached = false;
  bool quit = false;
  std::string name = "skirmish-bot";
};

std::filesystem::path replay_path_for(const std::string& base, std::uint32_t game, std::uint32_t games) {
  std::filesystem::path p(base);
  if (games <= 1) return p;
  return p.parent_path() / (p.stem().string() + "-" + std::to_string(game) + p.extension().string());
}

int cmd_bot(const BotArgs& a, std::ostream& out, std::ostream& err) {
  Endpoint endpoint;
  try {
    endpoint = a.pipe.empty() ? Endpoint::parse(a.connect) : Endpoint::local(a.pipe);
  } catch (const std::exception& e) {
    err << "bot: " << e.what() << '\n';
    return kUsage;
  }
  const auto policy = a.policy == "idle" ? &idle_policy : &attack_closest;

  std::optional<Client> client;
  GameResult last = GameResult::Draw;
  try {
    for (std::uint32_t game = 0; game < a.games; ++game) {
      if (!client || !a.attached) {
        client.reset();
        ClientOptions options;
        options.name = a.name;
        client.emplace(Client::connect(endpoint, options));
      } else {
        client->restart();
      }
      const Setup& setup = client->state().setup;
      std::optional<ReplayWriter> writer;
      if (!a.record.empty()) {
        writer.emplace(replay_path_for(a.record, game, a.games), setup, a.keyframe_interval);
      }
      for (;;) {
        const ClientState& st = client->receive();
        if (st.game_ended) break;
        if (writer) writer->add_frame(*st.latest_frame);
        client->send_commands(policy(*st.latest_frame, setup.roster));
      }
      const ClientState& st = client->state();
      last = *st.last_result;
      if (writer) writer->finish(End{last, st.final_frame});
      out << "game " << game << " player" << int(setup.player_id) << ' ' << result_name(last)
          << " final_frame " << st.final_frame << std::endl;
    }
    if (a.quit && client) client->quit();
  } catch (const ConnectionError& e) {
    err << "bot: " << e.what() << '\n';
    return kConnectFailed;
  } catch (const NetError& e) {
    err << "bot: " << e.what() << '\n';
    return kConnectFailed;
  } catch (const std::exception& e) {
    err << "bot: " << e.what() << '\n';
    return kFailed;
  }
  return exit_code_for(last);
}

int cmd_replay(const std::string& action, const std::string& path, std::ostream& out,
               std::ostream& err) {
  if (action == "verify") {
    const VerifyReport report = verify_replay(path);
    if (!report.ok()) {
      for (const auto& p : report.problems) err << path << ": " << p << '\n';
      return kFailed;
    }
    out << path << ": ok, " << report.frames << " frames (" << report.keyframes
        << " keyframes)" << std::endl;
    return kOk;
  }
  try {
    ReplayReader reader{std::filesystem::path(path)};
    const auto total_hp = [](const UnitMap& group) {
      return std::accumulate(group.begin(), group.end(), std::int64_t{0},
                             [](std::int64_t acc, const auto& kv) { return acc + kv.second.hp; });
    };
    while (auto frame = reader.next()) {
      out << "frame " << frame->frame_number << " myself " << frame->units_myself.size()
          << " enemy " << frame->units_enemy.size() << " hp_myself " << total_hp(frame->units_myself)
          << " hp_enemy " << total_hp(frame->units_enemy) << '\n';
    }
  } catch (const std::exception& e) {
    err << path << ": " << e.what() << '\n';
    return kFailed;
  }
  return kOk;
}

int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const BenchReport r = run_bench(options);
    out << "frames " << r.frames << '\n'
        << "units " << r.units << '\n'
        << "seconds " << r.seconds << '\n'
        << "frames_per_sec " << r.frames_per_sec << '\n'
        << "state_bytes_per_frame " << r.state_bytes_per_frame << '\n'
        << "commands_bytes_per_frame " << r.commands_bytes_per_frame << '\n'
        << "wire_bytes_per_frame " << r.wire_bytes_per_frame << std::endl;
  } catch (const std::exception& e) {
    err << "bench: " << e.what() << '\n';
    return kFailed;
  }
  return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"skirmish: lockstep micro-RTS server, client bot and replay tools", "skirmish"};
  app.require_subcommand(1);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Host matches");
  serve_cmd->add_option("--mode", serve.mode, "controlled or attached")
      ->required()
      ->check(CLI::IsMember({"controlled", "attached"}));
  auto* listen_opt = serve_cmd->add_option("--listen", serve.listen, "TCP host:port");
  auto* pipe_opt = serve_cmd->add_option("--pipe", serve.pipe, "local socket path");
  listen_opt->excludes(pipe_opt);
  serve_cmd->add_option("--config", serve.config, "game config file");
  serve_cmd->add_option("--opponent", serve.opponent, "idle, attack_closest or client")
      ->check(CLI::IsMember({"idle", "attack_closest", "client"}));
  serve_cmd->add_option("--matches", serve.matches, "exit after this many matches (controlled)");
  serve_cmd->add_option("--handshake-timeout-ms", serve.handshake_ms, "HELLO deadline");

  BotArgs bot;
  auto* bot_cmd = app.add_subcommand("bot", "Play with a scripted policy");
  auto* connect_opt = bot_cmd->add_option("--connect", bot.connect, "TCP host:port");
  auto* bot_pipe_opt = bot_cmd->add_option("--pipe", bot.pipe, "local socket path");
  connect_opt->excludes(bot_pipe_opt);
  bot_cmd->add_option("--policy", bot.policy, "attack_closest or idle")
      ->check(CLI::IsMember({"attack_closest", "idle"}));
  bot_cmd->add_option("--record", bot.record, "write a .tcr replay");
  bot_cmd->add_option("--keyframe-interval", bot.keyframe_interval, "replay keyframe spacing")
      ->check(CLI::PositiveNumber);
  bot_cmd->add_option("--games", bot.games, "number of matches to play")->check(CLI::PositiveNumber);
  bot_cmd->add_flag("--attached", bot.attached, "reuse the connection via RESTART");
  bot_cmd->add_flag("--quit", bot.quit, "send QUIT when done");
  bot_cmd->add_option("--name", bot.name, "client name sent in HELLO");

  std::string replay_action, replay_path;
  auto* replay_cmd = app.add_subcommand("replay", "Inspect .tcr replays");
  replay_cmd->add_option("action", replay_action, "verify or dump")
      ->required()
      ->check(CLI::IsMember({"verify", "dump"}));
  replay_cmd->add_option("path", replay_path, "replay file")->required();

  BenchOptions bench;
  std::string transport = "tcp";
  auto* bench_cmd = app.add_subcommand("bench", "Measure lockstep throughput over loopback");
  bench_cmd->add_option("--frames", bench.frames, "frames to play")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "scenario seed");
  bench_cmd->add_option("--transport", transport, "tcp or pipe")->check(CLI::IsMember({"tcp", "pipe"}));

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "skirmish: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  if (serve_cmd->parsed()) {
    if (serve.listen.empty() && serve.pipe.empty()) {
      err << "serve: one of --listen or --pipe is required\n";
      return kUsage;
    }
    return cmd_serve(serve, out, err);
  }
  if (bot_cmd->parsed()) {
    if (bot.connect.empty() && bot.pipe.empty()) {
      err << "bot: one of --connect or --pipe is required\n";
      return kUsage;
    }
    return cmd_bot(bot, out, err);
  }
  if (replay_cmd->parsed()) return cmd_replay(replay_action, replay_path, out, err);
  bench.local_socket = transport == "pipe";
  return cmd_bench(bench, out, err);
}

} // namespace skirmish::cli
