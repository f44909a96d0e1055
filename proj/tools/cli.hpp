#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace skirmish::cli {

enum ExitCode : int {
  kWin = 0,
  kOk = 0,
  kLoss = 1,
  kFailed = 1,
  kDraw = 2,
  kUsage = 2,
  kConnectFailed = 3,
};

/// Runs `skirmish <args...>`; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct BenchOptions {
  std::uint32_t frames = 10000;
  std::uint64_t seed = 42;
  bool local_socket = false;
};

struct BenchReport {
  std::uint32_t frames = 0;
  double seconds = 0;
  double frames_per_sec = 0;
  double state_bytes_per_frame = 0;    // STATE payload, unframed
  double commands_bytes_per_frame = 0; // COMMANDS payload, unframed
  double wire_bytes_per_frame = 0;     // both directions, with length prefixes
  std::uint32_t units = 0;
};

/// Serves a 5v5 match in-process and plays it from a client over loopback, one
/// lockstep round trip per frame.
BenchReport run_bench(const BenchOptions& options);

} // namespace skirmish::cli
