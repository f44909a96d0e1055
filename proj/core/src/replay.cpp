#include "skirmish/replay.hpp"

#include "skirmish/frame.hpp"
#include "skirmish/framing.hpp"

#include <algorithm>
#include <cstring>
#include <iterator>

namespace skirmish {

ReplayWriter::ReplayWriter(const std::filesystem::path& path, const Setup& setup,
                           std::uint32_t keyframe_interval)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), interval_(keyframe_interval) {
  if (interval_ < 1) throw UsageError("keyframe interval must be >= 1");
  if (!out_) throw ReplayError("cannot create replay file " + path.string(), 0);
  out_.write(kReplayMagic, sizeof(kReplayMagic));
  write_record(encode_message(setup));
}

void ReplayWriter::write_record(std::span<const std::uint8_t> payload) {
  const auto at = static_cast<std::size_t>(out_.tellp());
  const Bytes framed = write_framed(payload);
  out_.write(reinterpret_cast<const char*>(framed.data()), static_cast<std::streamsize>(framed.size()));
  out_.flush();
  if (!out_) {
    throw ReplayError("write to " + path_.string() + " failed; the file is incomplete", at);
  }
}

void ReplayWriter::add_frame(const Frame& frame) {
  if (finished_) throw UsageError("add_frame after finish");
  if (prev_ && frame.frame_number <= prev_->frame_number) {
    throw UsageError("replay frames must have increasing frame numbers");
  }
  scratch_.clear();
  const bool key = frames_ % interval_ == 0;
  if (key) {
    encode_message(State{frame}, scratch_);
    ++keyframes_;
  } else {
    encode_delta(delta_encode(*prev_, frame), scratch_);
  }
  write_record(scratch_);
  prev_ = frame;
  ++frames_;
}

void ReplayWriter::finish(const End& end) {
  if (finished_) throw UsageError("replay already finished");
  write_record(encode_message(end));
  finished_ = true;
}

void record(std::span<const Message> transcript, const std::filesystem::path& path,
            std::uint32_t keyframe_interval) {
  if (transcript.size() < 2) throw UsageError("transcript needs SETUP and END");
  const auto* setup = std::get_if<Setup>(&transcript.front());
  const auto* end = std::get_if<End>(&transcript.back());
  if (setup == nullptr || end == nullptr) {
    throw UsageError("transcript must start with SETUP and finish with END");
  }
  ReplayWriter writer(path, *setup, keyframe_interval);
  for (const auto& msg : transcript.subspan(1, transcript.size() - 2)) {
    const auto* state = std::get_if<State>(&msg);
    if (state == nullptr) throw UsageError("transcript body may only hold STATE messages");
    writer.add_frame(state->frame);
  }
  writer.finish(*end);
}

namespace {

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReplayError("cannot open replay file " + path.string(), 0);
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace

ReplayReader::ReplayReader(const std::filesystem::path& path) : data_(read_file(path)) {
  read_header();
}

ReplayReader::ReplayReader(Bytes contents) : data_(std::move(contents)) { read_header(); }

void ReplayReader::read_header() {
  if (data_.size() < sizeof(kReplayMagic) ||
      std::memcmp(data_.data(), kReplayMagic, sizeof(kReplayMagic)) != 0) {
    throw ReplayError("bad magic; not a replay file", 0);
  }
  pos_ = sizeof(kReplayMagic);
  auto rec = next_record();
  if (!rec) throw ReplayError("missing SETUP header", pos_);
  try {
    auto msg = decode_message(rec->second);
    auto* setup = std::get_if<Setup>(&msg);
    if (setup == nullptr) throw ReplayError("header record is not SETUP", rec->first);
    setup_ = std::move(*setup);
  } catch (const DecodeError& e) {
    throw ReplayError(std::string("bad SETUP header: ") + e.what(), rec->first);
  }
}

std::optional<std::pair<std::size_t, std::span<const std::uint8_t>>> ReplayReader::next_record() {
  const std::size_t at = pos_;
  const std::span<const std::uint8_t> rest(data_.data() + pos_, data_.size() - pos_);
  SpanSource source(rest);
  std::optional<Bytes> payload;
  try {
    payload = try_read_framed(source);
  } catch (const ProtocolError& e) {
    throw ReplayError(std::string("truncated record: ") + e.what(), at);
  }
  if (!payload) return std::nullopt;
  pos_ += source.position();
  return std::pair{at, rest.subspan(kFrameHeaderBytes, payload->size())};
}

std::optional<Frame> ReplayReader::next() {
  if (end_) return std::nullopt;
  auto rec = next_record();
  if (!rec) throw ReplayError("replay ends without an END trailer", pos_);
  const auto [at, payload] = *rec;
  const std::size_t body_offset = at + kFrameHeaderBytes;
  if (payload.empty()) throw ReplayError("empty record", at);

  const auto tag = static_cast<MessageTag>(payload[0]);
  const auto decode_at = [&, body_offset = body_offset](std::span<const std::uint8_t> bytes) {
    try {
      return decode_message(bytes);
    } catch (const DecodeError& e) {
      throw ReplayError(e.what(), body_offset + e.offset());
    }
  };
  if (tag == MessageTag::State) {
    auto msg = decode_at(payload);
    prev_ = std::move(std::get<State>(msg).frame);
    last_keyframe_ = true;
    return prev_;
  }
  if (tag == MessageTag::Delta) {
    if (!prev_) throw ReplayError("first record must be a full STATE", at);
    try {
      const FrameDelta delta = decode_delta(payload, body_offset);
      prev_ = delta_apply(*prev_, delta);
    } catch (const DecodeError& e) {
      throw ReplayError(e.what(), e.offset());
    } catch (const DeltaError& e) {
      throw ReplayError(std::string("delta chain corrupt: ") + e.what(), at);
    }
    last_keyframe_ = false;
    return prev_;
  }
  if (tag == MessageTag::End) {
    auto msg = decode_at(payload);
    end_ = std::get<End>(msg);
    if (pos_ != data_.size()) throw ReplayError("trailing bytes after END", pos_);
    return std::nullopt;
  }
  throw ReplayError("unexpected record tag " + std::to_string(payload[0]), body_offset);
}

Replay load_replay(const std::filesystem::path& path) {
  ReplayReader reader(path);
  Replay replay;
  replay.setup = reader.setup();
  while (auto frame = reader.next()) replay.frames.push_back(std::move(*frame));
  replay.end = *reader.end();
  return replay;
}

namespace {

void check_roster_fields(const UnitState& u, const Roster& roster, const std::string& where,
                         std::vector<std::string>& problems) {
  const auto* spec = roster.find(u.type);
  if (spec == nullptr) return; // validate_frame reports it
  const auto mismatch = [&](const char* field) {
    problems.push_back(where + "unit " + std::to_string(u.id) + ": " + field +
                       " disagrees with roster");
  };
  if (u.armor != spec->armor) mismatch("armor");
  if (u.size != 1) mismatch("size");
  if (u.gwattack != spec->ground.damage) mismatch("gwattack");
  if (u.awattack != spec->air.damage) mismatch("awattack");
  if (u.gwrange != spec->ground.range) mismatch("gwrange");
  if (u.awrange != spec->air.range) mismatch("awrange");
}

// hp a unit without shields can lose in one window: any sum of single hits from the
// types that might be shooting at it.
bool plausible_hp_loss(std::int32_t loss, const UnitTypeSpec& target,
                       const std::vector<const UnitTypeSpec*>& shooters) {
  if (loss == 0) return true;
  std::vector<std::int32_t> hits;
  for (const auto* s : shooters) {
    const Weapon& w = s->weapon_against(target.flyer);
    if (w.present()) hits.push_back(std::max(1, w.damage - target.armor));
  }
  std::vector<bool> reachable(static_cast<std::size_t>(loss) + 1, false);
  reachable[0] = true;
  for (std::int32_t v = 1; v <= loss; ++v) {
    for (std::int32_t h : hits) {
      if (h <= v && reachable[static_cast<std::size_t>(v - h)]) {
        reachable[static_cast<std::size_t>(v)] = true;
        break;
      }
    }
  }
  return reachable[static_cast<std::size_t>(loss)];
}

void check_continuity(const UnitMap& before, const UnitMap& after, const Roster& roster,
                      std::int64_t frame_skip, const std::vector<const UnitTypeSpec*>& shooters,
                      const std::string& where, std::vector<std::string>& problems) {
  for (const auto& [id, now] : after) {
    auto it = before.find(id);
    if (it == before.end()) continue;
    const UnitState& was = it->second;
    const auto bad = [&](const std::string& what) {
      problems.push_back(where + "unit " + std::to_string(id) + ": " + what);
    };
    if (now.type != was.type) bad("type changed");
    if (now.hp > was.hp) bad("hp increased");
    if (now.shield > was.shield) bad("shield increased");
    const auto* spec = roster.find(now.type);
    if (spec == nullptr) continue;
    if (was.shield == 0 && now.hp >= 0 && now.hp < was.hp && was.hp <= spec->max_hp &&
        !plausible_hp_loss(was.hp - now.hp, *spec, shooters)) {
      bad("hp loss is no sum of hits");
    }
    // A weapon either cooled for the whole window or fired somewhere inside it.
    const auto cooled = [&](std::int32_t cd, std::int32_t cd_was, std::int32_t full) {
      const std::int64_t idle_cd = std::max<std::int64_t>(0, cd_was - frame_skip);
      const std::int64_t fired_min = std::max<std::int64_t>(0, full - frame_skip + 1);
      return cd == idle_cd || (cd >= fired_min && cd <= full);
    };
    if (!cooled(now.gwcd, was.gwcd, spec->ground.cooldown)) bad("gwcd jumped");
    if (!cooled(now.awcd, was.awcd, spec->air.cooldown)) bad("awcd jumped");
    // Orders only change at the start of a window or drop to idle inside it, so a unit
    // that fired cannot end the window walking.
    const auto fired = [&](std::int32_t cd, std::int32_t cd_was) {
      return cd > 0 && cd != std::max<std::int64_t>(0, cd_was - frame_skip);
    };
    const bool shot = fired(now.gwcd, was.gwcd) || fired(now.awcd, was.awcd);
    if (shot && !now.idle && now.target == kNoTarget) bad("fired while under a move order");
    // The same reasoning pins a walking unit between where it stood and its goal.
    const auto between = [](std::int32_t v, std::int32_t from, std::int32_t to) {
      return v >= std::min(from, to) && v <= std::max(from, to);
    };
    if (!now.idle && now.target == kNoTarget &&
        (!between(now.position.x, was.position.x, now.targetpos.x) ||
         !between(now.position.y, was.position.y, now.targetpos.y))) {
      bad("walked away from its goal");
    }
    // Each axis moves at most speed_fp per tick, and a tick spent firing is not spent moving.
    const std::int64_t ticks = frame_skip - (shot ? 1 : 0);
    const std::int64_t reach = (spec->speed_fp * ticks + 255) / 256;
    if (std::abs(std::int64_t{now.position.x} - was.position.x) > reach ||
        std::abs(std::int64_t{now.position.y} - was.position.y) > reach) {
      bad("moved faster than its speed");
    }
  }
}

std::vector<const UnitTypeSpec*> types_in(const UnitMap& units, const Roster& roster) {
  std::vector<const UnitTypeSpec*> out;
  for (const auto& [id, u] : units) {
    const auto* spec = roster.find(u.type);
    if (spec != nullptr && std::find(out.begin(), out.end(), spec) == out.end()) out.push_back(spec);
  }
  return out;
}

std::vector<const UnitTypeSpec*> all_types(const Roster& roster) {
  std::vector<const UnitTypeSpec*> out;
  for (const auto& t : roster.types()) out.push_back(&t);
  return out;
}

// A target was alive at some point inside the window, so it shows up in one of the
// two frames bracketing it. Own targets can hide in the fog, enemy targets cannot.
void check_targets(const Frame& before, const Frame& after, bool fog, const std::string& where,
                   std::vector<std::string>& problems) {
  const auto seen = [](const UnitMap& a, const UnitMap& b, UnitId id) {
    return a.contains(id) || b.contains(id);
  };
  for (const auto& [id, u] : after.units_myself) {
    if (u.target == kNoTarget) continue;
    if (after.units_myself.contains(u.target) || before.units_myself.contains(u.target) ||
        (!fog && !seen(before.units_enemy, after.units_enemy, u.target))) {
      problems.push_back(where + "unit " + std::to_string(id) + ": target is not an enemy");
    }
  }
  for (const auto& [id, u] : after.units_enemy) {
    if (u.target == kNoTarget) continue;
    if (!seen(before.units_myself, after.units_myself, u.target)) {
      problems.push_back(where + "enemy unit " + std::to_string(id) + ": target is not one of ours");
    }
  }
}

} // namespace

VerifyReport verify_replay(ReplayReader& reader) {
  VerifyReport report;
  const Setup& setup = reader.setup();
  const auto map_w = static_cast<std::int32_t>(setup.map_w);
  const auto map_h = static_cast<std::int32_t>(setup.map_h);
  std::optional<Frame> prev;
  try {
    while (auto frame = reader.next()) {
      const std::string where = "frame " + std::to_string(frame->frame_number) + ": ";
      ++report.frames;
      if (reader.last_was_keyframe()) ++report.keyframes;
      for (const auto& v : validate_frame(*frame, map_w, map_h, setup.roster)) {
        report.problems.push_back(where + v);
      }
      for (const auto* group : {&frame->units_myself, &frame->units_enemy}) {
        for (const auto& [id, u] : *group) check_roster_fields(u, setup.roster, where, report.problems);
      }
      const Bytes canonical = encode_message(State{*frame});
      if (std::get<State>(decode_message(canonical)).frame != *frame) {
        report.problems.push_back(where + "frame does not survive canonical re-encoding");
      }
      if (!prev && frame->frame_number != 0) {
        report.problems.push_back(where + "first frame is not frame 0");
      }
      if (!prev) {
        for (const auto* group : {&frame->units_myself, &frame->units_enemy}) {
          for (const auto& [id, u] : *group) {
            if (!u.idle) report.problems.push_back(where + "unit " + std::to_string(id) + " has an order before any command");
          }
        }
      }
      if (prev) {
        if (frame->frame_number != prev->frame_number + setup.frame_skip) {
          report.problems.push_back(where + "frame number does not advance by frame_skip");
        }
        for (const auto& [id, u] : frame->units_myself) {
          if (!prev->units_myself.contains(id)) {
            report.problems.push_back(where + "own unit " + std::to_string(id) + " appeared mid-match");
          }
        }
        if (!setup.fog) {
          for (const auto& [id, u] : frame->units_enemy) {
            if (!prev->units_enemy.contains(id)) {
              report.problems.push_back(where + "enemy unit " + std::to_string(id) + " appeared mid-match");
            }
          }
        }
        check_targets(*prev, *frame, setup.fog, where, report.problems);
        // Our units are only shot by enemies we could see, unless the fog hides some.
        check_continuity(prev->units_myself, frame->units_myself, setup.roster, setup.frame_skip,
                         setup.fog ? all_types(setup.roster) : types_in(prev->units_enemy, setup.roster),
                         where, report.problems);
        check_continuity(prev->units_enemy, frame->units_enemy, setup.roster, setup.frame_skip,
                         types_in(prev->units_myself, setup.roster), where, report.problems);
      }
      prev = std::move(frame);
    }
    const End& end = *reader.end();
    if (!prev) {
      report.problems.push_back("replay holds no frames");
    } else if (end.final_frame <= prev->frame_number ||
               end.final_frame > prev->frame_number + setup.frame_skip) {
      report.problems.push_back("END final_frame " + std::to_string(end.final_frame) +
                                " does not follow the last frame");
    }
  } catch (const ProtocolError& e) {
    report.problems.push_back(e.what());
  }
  return report;
}

VerifyReport verify_replay(const std::filesystem::path& path) {
  try {
    ReplayReader reader(path);
    return verify_replay(reader);
  } catch (const ProtocolError& e) {
    VerifyReport report;
    report.problems.push_back(e.what());
    return report;
  }
}

} // namespace skirmish
