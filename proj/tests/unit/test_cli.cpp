#include "doctest.h"

#include "harness.hpp"

#include "cli.hpp"
#include "skirmish/game_config.hpp"
#include "skirmish/replay.hpp"

#include <fstream>
#include <future>
#include <sstream>

using namespace skirmish;
using namespace std::chrono_literals;
using skirmish::testing::ServerThread;
using skirmish::testing::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = skirmish::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

const std::filesystem::path kConfigs = SKIRMISH_SOURCE_DIR "/configs";

bool wait_for_file(const std::filesystem::path& p) {
  for (int i = 0; i < 500; ++i) {
    if (std::filesystem::exists(p)) return true;
    std::this_thread::sleep_for(10ms);
  }
  return false;
}

} // namespace

TEST_CASE("shipped configs load") {
  const auto duel = load_game_config(kConfigs / "duel.cfg");
  CHECK(std::get<std::vector<Spawn>>(duel.scenario).size() == 2);
  const auto mirror = load_game_config(kConfigs / "mirror5.cfg");
  CHECK(std::get<RandomMirror>(mirror.scenario) == RandomMirror{5, 0});
  CHECK(mirror.seed == 42);
  const auto fog = load_game_config(kConfigs / "fog_mixed.cfg");
  CHECK(fog.fog);
  CHECK(fog.frame_skip == 2);
  CHECK(fog.roster == default_roster());
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"serve", "--mode", "bogus", "--listen", "127.0.0.1:0"}).code == 2);
  CHECK(run_cli({"serve", "--mode", "controlled"}).code == 2);
  CHECK(run_cli({"bot"}).code == 2);
  CHECK(run_cli({"bot", "--connect", "127.0.0.1:1", "--policy", "random"}).code == 2);
  CHECK(run_cli({"replay", "explode", "x.tcr"}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("serve reports startup failures") {
  CHECK(run_cli({"serve", "--mode", "controlled", "--listen", "127.0.0.1:0", "--config",
             "/nonexistent.cfg"}).code == 2);
  ServerThread taken(skirmish::testing::controlled(skirmish::testing::mirror_config()));
  CHECK(run_cli({"serve", "--mode", "controlled", "--listen", taken.endpoint().to_string()}).code == 1);
}

TEST_CASE("bot exit codes follow the result") {
  SUBCASE("win") {
    ServerThread srv(skirmish::testing::controlled(load_game_config(kConfigs / "mirror5.cfg")));
    const auto r = run_cli({"bot", "--connect", srv.endpoint().to_string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("win") != std::string::npos);
  }
  SUBCASE("draw at max_frames") {
    ServerThread srv(skirmish::testing::controlled(load_game_config(kConfigs / "mirror5.cfg")));
    const auto r = run_cli({"bot", "--connect", srv.endpoint().to_string(), "--policy", "idle"});
    CHECK(r.code == 2);
    CHECK(r.out.find("draw final_frame 5000") != std::string::npos);
  }
  SUBCASE("loss") {
    ServerThread srv(skirmish::testing::controlled(load_game_config(kConfigs / "mirror5.cfg"),
                                                   OpponentKind::BuiltinAttackClosest));
    CHECK(run_cli({"bot", "--connect", srv.endpoint().to_string(), "--policy", "idle"}).code == 1);
  }
  SUBCASE("connection failure") {
    CHECK(run_cli({"bot", "--connect", "127.0.0.1:1"}).code == 3);
    CHECK(run_cli({"bot", "--pipe", "/nonexistent/dir/s.sock"}).code == 3);
  }
}

TEST_CASE("bot records a verifiable replay; replay verify and dump") {
  TempDir dir;
  ServerThread srv(skirmish::testing::controlled(skirmish::testing::mirror_config(42)));
  const auto path = (dir / "match.tcr").string();
  REQUIRE(run_cli({"bot", "--connect", srv.endpoint().to_string(), "--record", path,
               "--keyframe-interval", "10"}).code == 0);
  const auto verify = run_cli({"replay", "verify", path});
  CHECK(verify.code == 0);
  const auto loaded = load_replay(path);
  const auto dump = run_cli({"replay", "dump", path});
  CHECK(dump.code == 0);
  CHECK(count_lines(dump.out) == loaded.frames.size());
  CHECK(dump.out.rfind("frame 0 myself 5 enemy 5 hp_myself 200 hp_enemy 200\n", 0) == 0);

  // Flip one byte inside the body of the third record.
  std::ifstream in(path, std::ios::binary);
  Bytes bytes(std::istreambuf_iterator<char>(in), {});
  in.close();
  std::size_t pos = 4;
  for (int record = 0; record < 3; ++record) {
    const std::uint32_t len = bytes[pos] | bytes[pos + 1] << 8 | bytes[pos + 2] << 16 | bytes[pos + 3] << 24;
    pos += 4 + len;
  }
  bytes[pos + 4 + 20] ^= 0x40;
  const auto bad = (dir / "bad.tcr").string();
  std::ofstream(bad, std::ios::binary).write(reinterpret_cast<const char*>(bytes.data()),
                                             static_cast<std::streamsize>(bytes.size()));
  CHECK(run_cli({"replay", "verify", bad}).code == 1);
  CHECK(run_cli({"replay", "verify", (dir / "missing.tcr").string()}).code == 1);
  CHECK(run_cli({"replay", "dump", (dir / "missing.tcr").string()}).code == 1);
}

TEST_CASE("serve in controlled mode over a pipe, with match log lines") {
  TempDir dir;
  const auto sock = (dir / "c.sock").string();
  auto server = std::async(std::launch::async, [&] {
    return run_cli({"serve", "--mode", "controlled", "--pipe", sock, "--config",
                (kConfigs / "duel.cfg").string(), "--matches", "2"});
  });
  REQUIRE(wait_for_file(sock));
  CHECK(run_cli({"bot", "--pipe", sock}).code == 0);
  CHECK(run_cli({"bot", "--pipe", sock, "--policy", "idle"}).code == 2);
  REQUIRE(server.wait_for(20s) == std::future_status::ready);
  const auto r = server.get();
  CHECK(r.code == 0);
  CHECK(r.out.find("match 0 seed 7") != std::string::npos);
  CHECK(r.out.find("match 1 seed 8") != std::string::npos);
  CHECK(r.out.find("player0=win") != std::string::npos);
}

TEST_CASE("serve in attached mode: several games, then QUIT") {
  TempDir dir;
  const auto sock = (dir / "a.sock").string();
  auto server = std::async(std::launch::async, [&] {
    return run_cli({"serve", "--mode", "attached", "--pipe", sock, "--config",
                (kConfigs / "duel.cfg").string()});
  });
  REQUIRE(wait_for_file(sock));
  const auto bot = run_cli({"bot", "--pipe", sock, "--attached", "--games", "3", "--quit"});
  CHECK(bot.code == 0);
  CHECK(count_lines(bot.out) == 3);
  REQUIRE(server.wait_for(20s) == std::future_status::ready);
  const auto r = server.get();
  CHECK(r.code == 0);
  CHECK(r.out.find("match 2 seed 9") != std::string::npos);
}

TEST_CASE("bench reports throughput and exact byte counts") {
  skirmish::cli::BenchOptions opts;
  opts.frames = 2000;
  const auto a = skirmish::cli::run_bench(opts);
  CHECK(a.frames == 2000);
  CHECK(a.units == 10);
  CHECK(a.frames_per_sec > 0);
  CHECK(a.state_bytes_per_frame == doctest::Approx(849));
  opts.local_socket = true;
  const auto b = skirmish::cli::run_bench(opts);
  CHECK(b.state_bytes_per_frame == a.state_bytes_per_frame);
  CHECK(b.commands_bytes_per_frame == a.commands_bytes_per_frame);
  const auto text = run_cli({"bench", "--frames", "500"});
  CHECK(text.code == 0);
  CHECK(text.out.find("frames_per_sec ") != std::string::npos);
}
