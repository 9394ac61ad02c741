#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bcb12/bitstring.hpp"
#include "bcb12/keyder.hpp"
#include "bcb12/partition.hpp"
#include "bcb12/transcript.hpp"

namespace bcb12 {

struct AttackBudget {
  std::uint32_t n_max = 0;
  std::uint64_t max_partitions = std::numeric_limits<std::uint64_t>::max();
  std::chrono::duration<double> time_limit = std::chrono::duration<double>::max();
};

/// Which block orderings Eve tries for each unordered partition.
///
/// canonical: one labelling per partition (RGS order), S(n, k) candidates per
/// level. Finds the key when the shared partition is itself in RGS order.
/// all: every one of the k! orderings, k! * S(n, k) per level. Finds the key
/// for any shared partition.
enum class Labeling : std::uint8_t { canonical, all };

struct AttackOptions {
  std::optional<BitString> crib;  // known plaintext prefix
  Labeling labeling = Labeling::canonical;
};

/// What Eve needs from the wire: the final round's T_B, T and the ciphertext.
struct InterceptedSession {
  std::uint64_t m = 0;
  BlockIndexList tb;
  MatchList t;
  BitString ciphertext;
};

/// Extracts the final round from a transcript. Throws Error{invalid_argument}
/// when a PARAM_M, TB_LIST, T_LIST or CIPHERTEXT frame is missing or the
/// lengths disagree.
InterceptedSession intercept(const Transcript& transcript);

struct Candidate {
  BitString key_prefix;             // first |ciphertext| key bits
  std::uint32_t n = 0;              // level where first produced
  std::vector<BlockIndex> labels;   // partition that first produced it
  bool hit = false;
};

struct LevelStats {
  std::uint32_t n = 0;
  BigInt search_space;          // partitions at this level (S(n,k), times k! for Labeling::all)
  std::uint64_t examined = 0;
  std::uint64_t new_candidates = 0;
  double seconds = 0.0;
};

enum class StopReason : std::uint8_t { completed, partition_limit, time_limit };

const char* to_string(StopReason r) noexcept;

struct AttackResult {
  std::uint32_t k = 0;
  Labeling labeling = Labeling::canonical;
  std::uint64_t examined = 0;
  std::vector<Candidate> candidates;  // deduplicated, first-seen order
  std::vector<LevelStats> levels;
  double elapsed_seconds = 0.0;
  bool crib_supplied = false;
  bool hit = false;
  StopReason stop = StopReason::completed;
};

/// Exhaustive search: for n = k..n_max, every k-block partition of [n] in
/// canonical order is run through derive_key with the intercepted T_B and T.
/// Throws Error{invalid_argument} on a zero budget, k = 0, or a T_B entry > k.
AttackResult eve_enumerate_keys(const Transcript& transcript, std::uint32_t k,
                                const AttackBudget& budget, const AttackOptions& options = {});
AttackResult eve_enumerate_keys(const InterceptedSession& session, std::uint32_t k,
                                const AttackBudget& budget, const AttackOptions& options = {});

struct GrowthRow {
  std::uint32_t n = 0;
  BigInt level;       // search space at this n
  BigInt cumulative;  // sum over k..n
};

/// Search-space size per level for n = k..n_to, computed by recurrence.
std::vector<GrowthRow> search_space_growth(std::uint32_t k, std::uint32_t n_to,
                                           Labeling labeling = Labeling::canonical);

/// Human-readable summary: one row per scanned level, hit details, and a
/// projection of the time needed to reach `target_n` at the measured rate.
std::string attack_report(const AttackResult& result, std::uint32_t target_n = 20);

}  // namespace bcb12
