#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "bcb12/bitstring.hpp"
#include "bcb12/channel.hpp"
#include "bcb12/keyder.hpp"
#include "bcb12/partition.hpp"
#include "bcb12/random.hpp"
#include "bcb12/transcript.hpp"

namespace bcb12 {

/// What Alice does with m after a key came out shorter than the message.
enum class MPolicy : std::uint8_t { keep, double_m };

struct SessionConfig {
  SetPartition partition;  // shared secret
  std::uint32_t s = 2;     // amplification parameter, m = L_M * s
  std::uint64_t seed = 0;
  std::uint32_t max_retries = 8;
  MPolicy m_policy = MPolicy::double_m;
  /// Largest m a party will accept or propose.
  std::uint64_t max_m = std::uint64_t{1} << 26;
};

/// Source of a party's private integers in 1..n.
class DrawSource {
 public:
  virtual ~DrawSource() = default;
  virtual std::vector<Element> draw(std::size_t m, std::uint32_t n) = 0;
};

/// Independent uniform draws from a seeded generator.
class SeededDraws final : public DrawSource {
 public:
  explicit SeededDraws(std::uint64_t seed) : rng_(seed) {}
  std::vector<Element> draw(std::size_t m, std::uint32_t n) override;

 private:
  Rng rng_;
};

/// Replays a fixed sequence, consumed front to back across attempts.
/// Throws Error{invalid_argument} when it runs out.
class FixedDraws final : public DrawSource {
 public:
  explicit FixedDraws(std::vector<Element> seq) : seq_(std::move(seq)) {}
  std::vector<Element> draw(std::size_t m, std::uint32_t n) override;

 private:
  std::vector<Element> seq_;
  std::size_t pos_ = 0;
};

enum class AlicePhase : std::uint8_t { idle, awaiting_tb, done, failed };
enum class BobPhase : std::uint8_t { awaiting_m, awaiting_t, awaiting_ciphertext, done, failed };

struct Proceed {
  MatchList t;
  BitString ciphertext;
};
struct Retry {
  std::uint64_t m;
};
struct Failed {};
using AliceDecision = std::variant<Proceed, Retry, Failed>;

/// Sender side. Holds the message, her draws and her list T_A privately.
class Alice {
 public:
  /// Draws default to SeededDraws(cfg.seed).
  Alice(SessionConfig cfg, BitString message, std::unique_ptr<DrawSource> draws = nullptr);

  /// Fixes m = L_M * s, draws her sequence and classifies it. Returns m.
  /// Throws Error{invalid_argument} on an empty message.
  std::uint64_t start();

  /// Compares Bob's list with hers and either proceeds with T and the
  /// ciphertext, asks for another round with a new m, or gives up.
  AliceDecision on_tb(const BlockIndexList& tb);

  AlicePhase phase() const noexcept { return phase_; }
  std::uint64_t m() const noexcept { return m_; }
  std::uint32_t retries() const noexcept { return retries_; }
  std::size_t message_bits() const noexcept { return message_.size(); }
  const std::vector<Element>& sequence() const noexcept { return sequence_; }
  const BlockIndexList& own_list() const noexcept { return own_; }
  const std::optional<KeyMaterial>& key() const noexcept { return key_; }

 private:
  void draw_round();

  SessionConfig cfg_;
  BitString message_;
  std::unique_ptr<DrawSource> draws_;
  AlicePhase phase_ = AlicePhase::idle;
  std::uint64_t m_ = 0;
  std::uint32_t retries_ = 0;
  std::vector<Element> sequence_;
  BlockIndexList own_;
  std::optional<KeyMaterial> key_;
};

/// Receiver side.
class Bob {
 public:
  explicit Bob(SessionConfig cfg, std::unique_ptr<DrawSource> draws = nullptr);

  /// Handles PARAM_M (or RETRY while awaiting T): draws m integers and
  /// returns T_B. Throws Error{protocol_violation} on m = 0 or out of order.
  BlockIndexList on_param(std::uint64_t m);

  /// Stores T; the ciphertext follows in a separate frame.
  void on_t_list(const MatchList& t);

  /// Derives the key from T_B and T and decrypts. Throws Error{no_match}
  /// or Error{key_too_short}.
  BitString on_ciphertext(const BitString& ciphertext);

  /// on_t_list followed by on_ciphertext.
  BitString on_t(const MatchList& t, const BitString& ciphertext);

  void on_abort() noexcept { phase_ = BobPhase::failed; }

  BobPhase phase() const noexcept { return phase_; }
  std::uint64_t m() const noexcept { return m_; }
  const std::vector<Element>& sequence() const noexcept { return sequence_; }
  const BlockIndexList& own_list() const noexcept { return own_; }
  const std::optional<KeyMaterial>& key() const noexcept { return key_; }

 private:
  SessionConfig cfg_;
  std::unique_ptr<DrawSource> draws_;
  BobPhase phase_ = BobPhase::awaiting_m;
  std::uint64_t m_ = 0;
  std::vector<Element> sequence_;
  BlockIndexList own_;
  MatchList t_;
  std::optional<KeyMaterial> key_;
};

/// Drives Alice over a channel until the ciphertext is sent. On exhausted
/// retries sends ABORT and throws Error{retries_exhausted}.
void run_alice(Alice& alice, Channel& channel);

/// Drives Bob until the plaintext is recovered. Throws Error{aborted} on ABORT
/// and Error{protocol_violation} on a frame that does not fit the current step.
BitString run_bob(Bob& bob, Channel& channel);

struct SessionResult {
  BitString plaintext;  // as recovered by Bob
  Transcript transcript;
};

/// Runs both parties over an in-memory channel, Bob on a worker thread, and
/// records the wire.
SessionResult run_session(Alice& alice, Bob& bob);
SessionResult run_session(const SessionConfig& alice_cfg, const SessionConfig& bob_cfg,
                          const BitString& message);

}  // namespace bcb12
