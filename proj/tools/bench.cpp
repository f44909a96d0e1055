#include "cli.hpp"

#include "skirmish/client.hpp"
#include "skirmish/server.hpp"

#include <filesystem>
#include <thread>
#include <unistd.h>

namespace skirmish::cli {

BenchReport run_bench(const BenchOptions& options) {
  ServerConfig config;
  config.mode = ServerMode::Controlled;
  config.opponent = OpponentKind::BuiltinIdle;
  config.max_matches = 1;
  config.game.seed = options.seed;
  config.game.fog = false;
  config.game.max_frames = static_cast<std::int32_t>(options.frames);
  config.game.scenario = RandomMirror{5, unit_types::kTrooper};
  if (options.local_socket) {
    config.endpoint = Endpoint::local((std::filesystem::temp_directory_path() /
                                       ("skirmish-bench-" + std::to_string(::getpid()) + ".sock"))
                                          .string());
  } else {
    config.endpoint = Endpoint::tcp("127.0.0.1", 0);
  }

  Server server(config);
  std::jthread serving([&] { server.run(); });

  BenchReport report;
  std::uint64_t state_bytes = 0, command_bytes = 0, wire_bytes = 0;
  Client client = Client::connect(server.endpoint());
  client.set_tap([&](bool outgoing, std::span<const std::uint8_t> payload) {
    wire_bytes += payload.size() + kFrameHeaderBytes;
    if (outgoing) {
      command_bytes += payload.size();
    } else if (!payload.empty() && payload[0] == static_cast<std::uint8_t>(MessageTag::State)) {
      state_bytes += payload.size();
    }
  });

  std::vector<Command> cmds;
  const auto start = std::chrono::steady_clock::now();
  for (;;) {
    const auto& st = client.receive();
    if (st.game_ended) break;
    const Frame& frame = *st.latest_frame;
    report.units = static_cast<std::uint32_t>(frame.units_myself.size() + frame.units_enemy.size());
    cmds.clear();
    for (const auto& [id, unit] : frame.units_myself) cmds.emplace_back(Stop{id});
    client.send_commands(cmds);
    ++report.frames;
  }
  const auto stop = std::chrono::steady_clock::now();
  serving.join();

  report.seconds = std::chrono::duration<double>(stop - start).count();
  if (report.frames > 0) {
    report.frames_per_sec = report.seconds > 0 ? report.frames / report.seconds : 0;
    report.state_bytes_per_frame = static_cast<double>(state_bytes) / report.frames;
    report.commands_bytes_per_frame = static_cast<double>(command_bytes) / report.frames;
    report.wire_bytes_per_frame = static_cast<double>(wire_bytes) / report.frames;
  }
  return report;
}

} // namespace skirmish::cli
