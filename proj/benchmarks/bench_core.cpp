#include "skirmish/codec.hpp"
#include "skirmish/delta.hpp"
#include "skirmish/engine.hpp"
#include "skirmish/framing.hpp"
#include "skirmish/helpers.hpp"
#include "skirmish/perspective.hpp"
#include "skirmish/visibility.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

namespace {

using namespace skirmish;

GameConfig mirror(std::int32_t per_side, bool fog = false) {
  GameConfig g;
  g.map_w = 2048;
  g.map_h = 2048;
  g.seed = 42;
  g.fog = fog;
  g.scenario = RandomMirror{per_side, unit_types::kTrooper};
  return g;
}

// A world a few dozen ticks into a fight, so orders and cooldowns are populated.
World fighting_world(std::int32_t per_side, bool fog = false) {
  World w = init_world(mirror(per_side, fog));
  for (int t = 0; t < 30; ++t) {
    for (PlayerId p : {PlayerId{0}, PlayerId{1}}) {
      apply_commands(w, p, attack_closest(build_player_frame(w, p), w.roster));
    }
    step(w, 1);
  }
  return w;
}

void BM_EncodeState(benchmark::State& state) {
  const World w = fighting_world(static_cast<std::int32_t>(state.range(0)));
  const Message msg = State{build_player_frame(w, 0)};
  Bytes out;
  for (auto _ : state) {
    out.clear();
    encode_message(msg, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * out.size()));
}
BENCHMARK(BM_EncodeState)->Arg(5)->Arg(50)->Arg(500);

void BM_DecodeState(benchmark::State& state) {
  const World w = fighting_world(static_cast<std::int32_t>(state.range(0)));
  const Bytes payload = encode_message(State{build_player_frame(w, 0)});
  for (auto _ : state) benchmark::DoNotOptimize(decode_message(payload));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * payload.size()));
}
BENCHMARK(BM_DecodeState)->Arg(5)->Arg(50)->Arg(500);

void BM_FramedRoundTrip(benchmark::State& state) {
  const World w = fighting_world(5);
  const Message msg = State{build_player_frame(w, 0)};
  for (auto _ : state) {
    const Bytes framed = write_framed(encode_message(msg));
    SpanSource source(framed);
    benchmark::DoNotOptimize(decode_message(read_framed(source)));
  }
}
BENCHMARK(BM_FramedRoundTrip);

void BM_Step(benchmark::State& state) {
  const World start = fighting_world(static_cast<std::int32_t>(state.range(0)));
  World w = start;
  for (auto _ : state) {
    if (w.result) {
      state.PauseTiming();
      w = start;
      state.ResumeTiming();
    }
    benchmark::DoNotOptimize(step(w, 1));
  }
}
BENCHMARK(BM_Step)->Arg(5)->Arg(50)->Arg(500);

void BM_VisibleEnemies(benchmark::State& state) {
  const auto n = static_cast<std::int32_t>(state.range(0));
  const World w = fighting_world(n, true);
  const auto placed = placed_units(w);
  for (auto _ : state) benchmark::DoNotOptimize(visible_enemies(placed, 0, w.roster, true));
}
BENCHMARK(BM_VisibleEnemies)->Arg(50)->Arg(500)->Arg(2000);

void BM_DeltaEncode(benchmark::State& state) {
  World w = fighting_world(static_cast<std::int32_t>(state.range(0)));
  const Frame before = build_player_frame(w, 0);
  step(w, 1);
  const Frame after = build_player_frame(w, 0);
  for (auto _ : state) benchmark::DoNotOptimize(encode_delta(delta_encode(before, after)));
}
BENCHMARK(BM_DeltaEncode)->Arg(5)->Arg(50)->Arg(500);

void BM_DeltaApply(benchmark::State& state) {
  World w = fighting_world(static_cast<std::int32_t>(state.range(0)));
  const Frame before = build_player_frame(w, 0);
  step(w, 1);
  const Bytes delta = encode_delta(delta_encode(before, build_player_frame(w, 0)));
  for (auto _ : state) benchmark::DoNotOptimize(delta_apply(before, decode_delta(delta)));
}
BENCHMARK(BM_DeltaApply)->Arg(5)->Arg(50)->Arg(500);

} // namespace

BENCHMARK_MAIN();
