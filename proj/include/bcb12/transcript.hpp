#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bcb12/frame.hpp"

namespace bcb12 {

enum class Direction : std::uint8_t { alice_to_bob, bob_to_alice };

const char* to_string(Direction d) noexcept;

struct TranscriptEntry {
  Direction direction;
  Frame frame;

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

/// Everything an eavesdropper on the classical channel sees, in wire order.
/// Holds frames only: never the partition, a party's draws or key bits.
class Transcript {
 public:
  void record(Direction d, const Frame& f) { entries_.push_back({d, f}); }

  const std::vector<TranscriptEntry>& entries() const noexcept { return entries_; }

  /// Concatenated wire bytes of every frame (the transcript file format).
  std::vector<std::uint8_t> bytes() const;

  /// Rebuilds a transcript from concatenated wire bytes. Direction is implied
  /// by frame type (TB_LIST is Bob's; ABORT is attributed to Alice).
  static Transcript parse(std::span<const std::uint8_t> bytes);

  static Transcript read_file(const std::string& path);
  void write_file(const std::string& path) const;

  friend bool operator==(const Transcript&, const Transcript&) = default;

 private:
  std::vector<TranscriptEntry> entries_;
};

}  // namespace bcb12
