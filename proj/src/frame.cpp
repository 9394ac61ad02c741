#include "bcb12/frame.hpp"

#include <algorithm>
#include <string>

#include "bcb12/error.hpp"

namespace bcb12 {

namespace {

void put_be(std::vector<std::uint8_t>& out, std::uint64_t v, int width) {
  for (int b = width - 1; b >= 0; --b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint64_t get_be(std::span<const std::uint8_t> in, std::size_t off, int width) {
  std::uint64_t v = 0;
  for (int b = 0; b < width; ++b) v = (v << 8) | in[off + static_cast<std::size_t>(b)];
  return v;
}

bool known_type(std::uint8_t t) { return t >= 0x01 && t <= 0x06; }

/// Validates the fixed header; returns payload length.
std::uint32_t check_header(std::span<const std::uint8_t> h) {
  for (std::size_t i = 0; i < std::min<std::size_t>(4, h.size()); ++i) {
    if (h[i] != kMagic[i]) throw Error(Errc::bad_magic, "frame: bad magic");
  }
  if (h.size() > 4 && h[4] != kWireVersion)
    throw Error(Errc::unknown_version, "frame: unknown version " + std::to_string(h[4]));
  if (h.size() > 5 && !known_type(h[5]))
    throw Error(Errc::unknown_type, "frame: unknown type " + std::to_string(h[5]));
  if (h.size() < kHeaderSize) return 0;
  return static_cast<std::uint32_t>(get_be(h, 6, 4));
}

void expect_type(const Frame& f, FrameType want) {
  if (f.type != want)
    throw Error(Errc::protocol_violation, std::string("expected ") + to_string(want) + " frame, got " +
                                              to_string(f.type));
}

void expect_size(const Frame& f, std::size_t want) {
  if (f.payload.size() != want)
    throw Error(Errc::length_mismatch, std::string(to_string(f.type)) + " payload is " +
                                           std::to_string(f.payload.size()) + " bytes, expected " +
                                           std::to_string(want));
}

Frame make_bits_frame(FrameType type, const BitString& bits) {
  if (bits.size() > 0xffffffffull) throw Error(Errc::overflow, "frame: bit count exceeds u32");
  Frame f{type, {}};
  f.payload.reserve(4 + (bits.size() + 7) / 8);
  put_be(f.payload, bits.size(), 4);
  const auto packed = bits.pack();
  f.payload.insert(f.payload.end(), packed.begin(), packed.end());
  return f;
}

BitString read_bits_frame(const Frame& f, FrameType type) {
  expect_type(f, type);
  if (f.payload.size() < 4) expect_size(f, 4);
  const std::uint64_t count = get_be(f.payload, 0, 4);
  expect_size(f, 4 + (count + 7) / 8);
  return BitString::unpack(std::span(f.payload).subspan(4), count);
}

}  // namespace

const char* to_string(FrameType type) noexcept {
  switch (type) {
    case FrameType::param_m: return "PARAM_M";
    case FrameType::tb_list: return "TB_LIST";
    case FrameType::t_list: return "T_LIST";
    case FrameType::ciphertext: return "CIPHERTEXT";
    case FrameType::retry: return "RETRY";
    case FrameType::abort: return "ABORT";
  }
  return "?";
}

std::vector<std::uint8_t> encode_frame(const Frame& f) {
  if (f.payload.size() > kMaxPayload) throw Error(Errc::overflow, "frame: payload exceeds 2^32-1 bytes");
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + f.payload.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(kWireVersion);
  out.push_back(static_cast<std::uint8_t>(f.type));
  put_be(out, f.payload.size(), 4);
  out.insert(out.end(), f.payload.begin(), f.payload.end());
  return out;
}

std::pair<Frame, std::span<const std::uint8_t>> decode_frame(std::span<const std::uint8_t> bytes) {
  const std::uint32_t length = check_header(bytes);
  if (bytes.size() < kHeaderSize) throw Error(Errc::truncated, "frame: truncated header");
  if (bytes.size() - kHeaderSize < length)
    throw Error(Errc::truncated, "frame: payload truncated, need " + std::to_string(length) + " bytes");
  Frame f{static_cast<FrameType>(bytes[5]), {}};
  const auto payload = bytes.subspan(kHeaderSize, length);
  f.payload.assign(payload.begin(), payload.end());
  return {std::move(f), bytes.subspan(kHeaderSize + length)};
}

void FrameDecoder::feed(std::span<const std::uint8_t> chunk) {
  if (pos_ > 0 && pos_ == buf_.size()) {
    buf_.clear();
    pos_ = 0;
  }
  buf_.insert(buf_.end(), chunk.begin(), chunk.end());
}

std::optional<Frame> FrameDecoder::next() {
  const auto pending = std::span<const std::uint8_t>(buf_).subspan(pos_);
  const std::uint32_t length = check_header(pending);
  if (pending.size() < kHeaderSize || pending.size() - kHeaderSize < length) return std::nullopt;
  auto [frame, rest] = decode_frame(pending);
  pos_ = buf_.size() - rest.size();
  // Compact once the consumed prefix dominates the buffer.
  if (pos_ > 4096 && pos_ * 2 > buf_.size()) {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(pos_));
    pos_ = 0;
  }
  return std::move(frame);
}

Frame make_param_m(std::uint64_t m) {
  Frame f{FrameType::param_m, {}};
  put_be(f.payload, m, 8);
  return f;
}

Frame make_retry(std::uint64_t m) {
  Frame f{FrameType::retry, {}};
  put_be(f.payload, m, 8);
  return f;
}

Frame make_tb_list(std::span<const BlockIndex> indices) {
  if (indices.size() > 0xffffffffull) throw Error(Errc::overflow, "TB_LIST: too many entries");
  Frame f{FrameType::tb_list, {}};
  f.payload.reserve(4 + 2 * indices.size());
  put_be(f.payload, indices.size(), 4);
  for (BlockIndex j : indices) {
    if (j > 0xffff) throw Error(Errc::overflow, "TB_LIST: block index exceeds 65535");
    put_be(f.payload, j, 2);
  }
  return f;
}

Frame make_t_list(const MatchList& t) {
  BitString bits(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) bits.set(i, t[i] == Mark::plus);
  return make_bits_frame(FrameType::t_list, bits);
}

Frame make_ciphertext(const BitString& c) { return make_bits_frame(FrameType::ciphertext, c); }

Frame make_abort(AbortReason reason) {
  Frame f{FrameType::abort, {}};
  put_be(f.payload, static_cast<std::uint16_t>(reason), 2);
  return f;
}

std::uint64_t read_param_m(const Frame& f) {
  expect_type(f, FrameType::param_m);
  expect_size(f, 8);
  return get_be(f.payload, 0, 8);
}

std::uint64_t read_retry(const Frame& f) {
  expect_type(f, FrameType::retry);
  expect_size(f, 8);
  return get_be(f.payload, 0, 8);
}

BlockIndexList read_tb_list(const Frame& f) {
  expect_type(f, FrameType::tb_list);
  if (f.payload.size() < 4) expect_size(f, 4);
  const std::uint64_t count = get_be(f.payload, 0, 4);
  expect_size(f, 4 + 2 * count);
  BlockIndexList out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = static_cast<BlockIndex>(get_be(f.payload, 4 + 2 * i, 2));
  return out;
}

MatchList read_t_list(const Frame& f) {
  const BitString bits = read_bits_frame(f, FrameType::t_list);
  MatchList t(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) t[i] = bits[i] ? Mark::plus : Mark::minus;
  return t;
}

BitString read_ciphertext(const Frame& f) { return read_bits_frame(f, FrameType::ciphertext); }

AbortReason read_abort(const Frame& f) {
  expect_type(f, FrameType::abort);
  expect_size(f, 2);
  return static_cast<AbortReason>(get_be(f.payload, 0, 2));
}

}  // namespace bcb12
