#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bcb12 {

/// Ordered sequence of bits of arbitrary length (not necessarily whole bytes).
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t size, bool value = false) : bits_(size, value ? 1 : 0) {}

  /// Parses ASCII '0'/'1'. A single trailing newline (LF or CRLF) is accepted.
  static BitString from_ascii(std::string_view text);

  /// Unpacks `bit_count` bits from MSB-first packed bytes.
  static BitString unpack(std::span<const std::uint8_t> bytes, std::size_t bit_count);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }
  void push_back(bool v) { bits_.push_back(v ? 1 : 0); }
  void append(const BitString& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
  }
  void reserve(std::size_t n) { bits_.reserve(n); }

  /// Appends the low `width` bits of `value`, most significant first.
  void append_uint(std::uint64_t value, unsigned width);

  /// First `n` bits. Throws Error{out_of_range} if n > size().
  BitString prefix(std::size_t n) const;

  std::size_t count_ones() const noexcept;

  std::string to_ascii() const;

  /// MSB-first packing; the final byte is zero-padded.
  std::vector<std::uint8_t> pack() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;  // one 0/1 per entry
};

/// Vernam map: out[i] = x[i] ^ key[i] over the first |x| key bits.
/// Encryption and decryption are the same call.
/// Throws Error{key_too_short} when |key| < |x|.
BitString xor_cipher(const BitString& x, const BitString& key);

/// Each byte rendered as 8 bits, MSB first.
BitString text_to_bits(std::span<const std::uint8_t> bytes);
BitString text_to_bits(std::string_view text);

/// Inverse of text_to_bits. Throws Error{length_mismatch} unless |b| % 8 == 0.
std::vector<std::uint8_t> bits_to_text(const BitString& b);

BitString read_bitstring_file(const std::string& path);
void write_bitstring_file(const std::string& path, const BitString& b);

}  // namespace bcb12
