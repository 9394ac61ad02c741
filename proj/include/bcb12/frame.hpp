#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bcb12/bitstring.hpp"
#include "bcb12/keyder.hpp"

namespace bcb12 {

/// Wire layout, all integers big-endian:
///
///   offset 0  magic   42 43 31 32  ("BC12")
///   offset 4  version 01
///   offset 5  type    (FrameType)
///   offset 6  length  u32, payload bytes
///   offset 10 payload
inline constexpr std::uint8_t kMagic[4] = {0x42, 0x43, 0x31, 0x32};
inline constexpr std::uint8_t kWireVersion = 0x01;
inline constexpr std::size_t kHeaderSize = 10;
inline constexpr std::uint64_t kMaxPayload = 0xffffffffull;

enum class FrameType : std::uint8_t {
  param_m = 0x01,     // u64 m
  tb_list = 0x02,     // u32 count, count x u16 block index
  t_list = 0x03,      // u32 bit count, packed bits MSB-first, 1 = PLUS
  ciphertext = 0x04,  // u32 bit count, packed bits MSB-first
  retry = 0x05,       // u64 new m
  abort = 0x06,       // u16 reason
};

const char* to_string(FrameType type) noexcept;

struct Frame {
  FrameType type = FrameType::abort;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const Frame&, const Frame&) = default;
};

enum class AbortReason : std::uint16_t {
  retries_exhausted = 1,
  protocol_violation = 2,
  internal = 3,
};

std::vector<std::uint8_t> encode_frame(const Frame& f);

/// Decodes one frame from the front of `bytes` and returns it with the
/// unconsumed remainder. Throws Error{bad_magic | unknown_version |
/// unknown_type | truncated}.
std::pair<Frame, std::span<const std::uint8_t>> decode_frame(std::span<const std::uint8_t> bytes);

/// Incremental decoder for a byte stream: feed arbitrary chunks, pop whole frames.
class FrameDecoder {
 public:
  void feed(std::span<const std::uint8_t> chunk);

  /// Next complete frame, or nullopt if more bytes are needed. Header errors
  /// throw as soon as the offending byte has arrived.
  std::optional<Frame> next();

  std::size_t buffered() const noexcept { return buf_.size() - pos_; }

 private:
  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

// Typed payload builders and readers. Readers check the frame type and the
// payload length, throwing Error{protocol_violation} / Error{length_mismatch}.

Frame make_param_m(std::uint64_t m);
Frame make_retry(std::uint64_t m);
Frame make_tb_list(std::span<const BlockIndex> indices);
Frame make_t_list(const MatchList& t);
Frame make_ciphertext(const BitString& c);
Frame make_abort(AbortReason reason);

std::uint64_t read_param_m(const Frame& f);
std::uint64_t read_retry(const Frame& f);
BlockIndexList read_tb_list(const Frame& f);
MatchList read_t_list(const Frame& f);
BitString read_ciphertext(const Frame& f);
AbortReason read_abort(const Frame& f);

}  // namespace bcb12
