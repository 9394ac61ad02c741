#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bcb12 {

/// Ground-set element, 1..n.
using Element = std::uint32_t;
/// Block index, 1..k. Block order is part of the shared secret.
using BlockIndex = std::uint32_t;

using BigInt = boost::multiprecision::cpp_int;

struct BlockSizeProfile {
  std::vector<std::uint32_t> sizes;  // sizes[j - 1] == |A_j|

  std::uint64_t total() const {
    return std::accumulate(sizes.begin(), sizes.end(), std::uint64_t{0});
  }
};

/// Exact non-negative fraction, always in lowest terms.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// An ordered partition of [n] = {1..n} into k nonempty blocks A_1..A_k.
/// Immutable once built.
class SetPartition {
 public:
  /// Validates and builds. block_of[e - 1] is the block of element e.
  /// Throws Error{invalid_partition} on k > n, out-of-range labels, length
  /// mismatch or an empty block.
  static SetPartition create(std::uint32_t n, std::uint32_t k, std::vector<BlockIndex> block_of);

  std::uint32_t n() const noexcept { return n_; }
  std::uint32_t k() const noexcept { return k_; }

  /// Block containing e. Throws Error{out_of_range} unless 1 <= e <= n.
  BlockIndex block_of(Element e) const;

  /// Elements of A_j in ascending order. Throws Error{out_of_range} unless 1 <= j <= k.
  std::span<const Element> block(BlockIndex j) const;

  std::span<const BlockIndex> labels() const noexcept { return block_of_; }

  BlockSizeProfile size_profile() const;

  friend bool operator==(const SetPartition& a, const SetPartition& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.block_of_ == b.block_of_;
  }

 private:
  SetPartition() = default;

  std::uint32_t n_ = 0;
  std::uint32_t k_ = 0;
  std::vector<BlockIndex> block_of_;
  std::vector<std::vector<Element>> blocks_;
};

SetPartition new_partition(std::uint32_t n, std::uint32_t k, std::vector<BlockIndex> block_of);

inline BlockIndex block_index_of(const SetPartition& p, Element e) { return p.block_of(e); }

/// Seeded random k-block partition of [n].
///
/// Labels are drawn uniformly from {1..k}^n and rejected until every block is
/// used, which is uniform over surjections (ordered partitions). When the
/// acceptance rate would drop below 1/64 the generator instead shuffles [n],
/// seeds one element per block and assigns the rest uniformly; that fallback
/// is not uniform.
SetPartition random_partition(std::uint32_t n, std::uint32_t k, std::uint64_t seed);

/// Same blocks relabelled by order of first appearance (the RGS labelling).
SetPartition canonicalize(const SetPartition& p);

/// S(n, k), Stirling number of the second kind.
BigInt stirling2(std::uint32_t n, std::uint32_t k);

/// Walks every k-block partition of [n] as a restricted growth string in
/// lexicographic order. Labels are 1-based: the first element is always in
/// block 1, and a new block j appears only after blocks 1..j-1.
class PartitionEnumerator {
 public:
  PartitionEnumerator(std::uint32_t n, std::uint32_t k);

  /// Current RGS, empty once exhausted.
  std::span<const BlockIndex> current() const noexcept { return rgs_; }
  bool done() const noexcept { return done_; }
  SetPartition partition() const;

  /// Advances to the lexicographic successor; returns false when exhausted.
  bool next();

 private:
  std::uint32_t n_;
  std::uint32_t k_;
  std::vector<BlockIndex> rgs_;
  std::vector<BlockIndex> prefix_max_;  // max(rgs_[0..i])
  bool done_ = false;
};

/// Results above this count are refused by enumerate_partitions.
inline constexpr std::uint64_t kEnumerationLimit = 10'000'000;

/// Materializes every k-block partition of [n] in canonical order.
/// Throws Error{overflow} when S(n, k) exceeds kEnumerationLimit.
std::vector<SetPartition> enumerate_partitions(std::uint32_t n, std::uint32_t k);

/// Probability that two independent uniform draws from [n] land in the same
/// block: sum_j (|A_j| / n)^2.
Ratio match_probability(const SetPartition& p);

/// Text form:
///   n=<n> k=<k>
///   <j>: e1 e2 ... (one line per block, ascending j and ascending elements)
std::string serialize_partition(const SetPartition& p);
SetPartition parse_partition(std::string_view text);

SetPartition read_partition_file(const std::string& path);
void write_partition_file(const std::string& path, const SetPartition& p);

std::ostream& operator<<(std::ostream& os, const SetPartition& p);

}  // namespace bcb12
