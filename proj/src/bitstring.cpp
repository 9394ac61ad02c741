#include "bcb12/bitstring.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bcb12/error.hpp"

namespace bcb12 {

BitString BitString::from_ascii(std::string_view text) {
  if (text.ends_with('\n')) text.remove_suffix(1);
  if (text.ends_with('\r')) text.remove_suffix(1);
  BitString out;
  out.bits_.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '0' && c != '1')
      throw Error(Errc::parse_error, "bitstring: unexpected character at offset " + std::to_string(i));
    out.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

BitString BitString::unpack(std::span<const std::uint8_t> bytes, std::size_t bit_count) {
  if ((bit_count + 7) / 8 > bytes.size())
    throw Error(Errc::length_mismatch, "bitstring: not enough bytes to unpack");
  BitString out;
  out.bits_.resize(bit_count);
  for (std::size_t i = 0; i < bit_count; ++i)
    out.bits_[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
  return out;
}

void BitString::append_uint(std::uint64_t value, unsigned width) {
  for (unsigned b = width; b-- > 0;) bits_.push_back(static_cast<std::uint8_t>((value >> b) & 1u));
}

BitString BitString::prefix(std::size_t n) const {
  if (n > bits_.size()) throw Error(Errc::out_of_range, "bitstring: prefix longer than string");
  BitString out;
  out.bits_.assign(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

std::size_t BitString::count_ones() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string BitString::to_ascii() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) s[i] = '1';
  return s;
}

std::vector<std::uint8_t> BitString::pack() const {
  std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  return out;
}

BitString xor_cipher(const BitString& x, const BitString& key) {
  if (key.size() < x.size())
    throw Error(Errc::key_too_short, "xor: key has " + std::to_string(key.size()) +
                                         " bits, input has " + std::to_string(x.size()));
  BitString out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.set(i, x[i] != key[i]);
  return out;
}

BitString text_to_bits(std::span<const std::uint8_t> bytes) {
  BitString out;
  out.reserve(bytes.size() * 8);
  for (auto byte : bytes) out.append_uint(byte, 8);
  return out;
}

BitString text_to_bits(std::string_view text) {
  return text_to_bits(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint8_t> bits_to_text(const BitString& b) {
  if (b.size() % 8 != 0)
    throw Error(Errc::length_mismatch,
                "bits_to_text: length " + std::to_string(b.size()) + " is not a multiple of 8");
  return b.pack();
}

BitString read_bitstring_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_argument, "cannot open bitstring file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return BitString::from_ascii(ss.str());
}

void write_bitstring_file(const std::string& path, const BitString& b) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::invalid_argument, "cannot write bitstring file " + path);
  out << b.to_ascii() << '\n';
}

}  // namespace bcb12
