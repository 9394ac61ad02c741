#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bcb12/bitstring.hpp"
#include "bcb12/partition.hpp"

namespace bcb12 {

/// Block index of each draw, one per position (T_A on Alice's side, T_B on Bob's).
using BlockIndexList = std::vector<BlockIndex>;

enum class Mark : std::uint8_t { minus = 0, plus = 1 };

/// Per-position agreement of the two block-index lists (T).
using MatchList = std::vector<Mark>;

std::size_t plus_count(const MatchList& t) noexcept;
std::string to_string(const MatchList& t);  // "+--+..."
MatchList match_list_from_string(std::string_view marks);

/// Block aggregation applied at every matching position.
enum class FKind : std::uint8_t { sum, product, max };

const char* to_string(FKind kind) noexcept;
FKind parse_fkind(std::string_view name);

struct KeyMaterial {
  FKind f_kind = FKind::sum;
  /// f(A_j) for every PLUS position, in order. PRODUCT wraps modulo 2^64,
  /// which leaves the low byte used by the encoding exact.
  std::vector<std::uint64_t> values;
  /// 8 bits per value (value mod 256, MSB first); size is L_C.
  BitString bits;

  friend bool operator==(const KeyMaterial&, const KeyMaterial&) = default;
};

/// indices[i] = block_of(seq[i]). Throws Error{out_of_range} on an entry outside 1..n.
BlockIndexList classify_sequence(const SetPartition& p, std::span<const Element> seq);

/// PLUS where the lists agree. Throws Error{length_mismatch} on unequal lengths.
MatchList compare_lists(std::span<const BlockIndex> ta, std::span<const BlockIndex> tb);

/// Picks f from the two low bits of j: 00 or 11 -> SUM, 10 -> PRODUCT, 01 -> MAX.
FKind select_f(BlockIndex j) noexcept;

std::uint64_t eval_f(FKind kind, const SetPartition& p, BlockIndex j);

/// Key from one party's own list and the shared match list. f is chosen by the
/// block at the first PLUS. Throws Error{no_match} when T has no PLUS (the
/// caller retries), Error{length_mismatch} on unequal lengths.
KeyMaterial derive_key(const SetPartition& p, std::span<const BlockIndex> own, const MatchList& t);

/// Concatenation of (v mod 256) as 8-bit MSB-first groups.
BitString encode_values(std::span<const std::uint64_t> values);

/// Key dump: "f=<KIND>\n<v1> <v2> ...\n<bits>\n".
std::string format_key_dump(const KeyMaterial& key);
KeyMaterial parse_key_dump(std::string_view text);

}  // namespace bcb12
