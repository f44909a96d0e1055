#pragma once

#include "skirmish/codec.hpp"
#include "skirmish/delta.hpp"
#include "skirmish/errors.hpp"

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace skirmish {

/// Unreadable replay; `offset()` is the file position of the offending record.
class ReplayError : public ProtocolError {
public:
  ReplayError(const std::string& what, std::size_t offset)
      : ProtocolError(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

inline constexpr char kReplayMagic[4] = {'T', 'C', 'R', '1'};
inline constexpr std::uint32_t kDefaultKeyframeInterval = 32;

/// Streams one player's match to a `.tcr` file: magic, framed SETUP, framed STATE or
/// DELTA records, framed END. Every record is flushed as it is written, so a crash
/// leaves a file whose complete prefix is still readable.
class ReplayWriter {
public:
  ReplayWriter(const std::filesystem::path& path, const Setup& setup,
               std::uint32_t keyframe_interval = kDefaultKeyframeInterval);

  /// Every keyframe_interval-th frame (starting with the first) is stored whole.
  void add_frame(const Frame& frame);
  void finish(const End& end);

  std::size_t frames() const noexcept { return frames_; }
  std::size_t keyframes() const noexcept { return keyframes_; }
  std::size_t deltas() const noexcept { return frames_ - keyframes_; }

private:
  void write_record(std::span<const std::uint8_t> payload);

  std::filesystem::path path_;
  std::ofstream out_;
  std::uint32_t interval_;
  std::optional<Frame> prev_;
  std::size_t frames_ = 0;
  std::size_t keyframes_ = 0;
  bool finished_ = false;
  Bytes scratch_;
};

/// Writes a SETUP, STATE..., END transcript. Throws UsageError on any other shape.
void record(std::span<const Message> transcript, const std::filesystem::path& path,
            std::uint32_t keyframe_interval = kDefaultKeyframeInterval);

/// Sequential reader. The constructor validates magic and SETUP.
class ReplayReader {
public:
  explicit ReplayReader(const std::filesystem::path& path);
  /// Reads from memory; used by tests and verification tools.
  explicit ReplayReader(Bytes contents);

  const Setup& setup() const noexcept { return setup_; }

  /// Next reconstructed frame, or nullopt once the END trailer has been read.
  /// Throws ReplayError for truncation, corruption, or a missing trailer.
  std::optional<Frame> next();

  const std::optional<End>& end() const noexcept { return end_; }
  bool last_was_keyframe() const noexcept { return last_keyframe_; }
  std::size_t offset() const noexcept { return pos_; }

private:
  void read_header();
  std::optional<std::pair<std::size_t, std::span<const std::uint8_t>>> next_record();

  Bytes data_;
  std::size_t pos_ = 0;
  Setup setup_;
  std::optional<Frame> prev_;
  std::optional<End> end_;
  bool last_keyframe_ = false;
};

struct Replay {
  Setup setup;
  std::vector<Frame> frames;
  End end;
};

/// Reads a whole replay. Throws ReplayError.
Replay load_replay(const std::filesystem::path& path);

struct VerifyReport {
  std::size_t frames = 0;
  std::size_t keyframes = 0;
  std::vector<std::string> problems;
  bool ok() const noexcept { return problems.empty(); }
};

/// Loads every frame and checks it: frame invariants, canonical re-encoding, cadence,
/// roster-derived fields, and plausibility between consecutive frames. Load errors
/// become problems rather than exceptions.
VerifyReport verify_replay(const std::filesystem::path& path);
VerifyReport verify_replay(ReplayReader& reader);

} // namespace skirmish
