#include "bcb12/protocol.hpp"

#include <exception>
#include <string>
#include <thread>

#include "bcb12/error.hpp"

namespace bcb12 {

namespace {

[[noreturn]] void violation(const std::string& msg) { throw Error(Errc::protocol_violation, msg); }

void check_m(std::uint64_t m, const SessionConfig& cfg) {
  if (m == 0) violation("m must be at least 1");
  if (m > cfg.max_m || m > 0xffffffffull)
    violation("m = " + std::to_string(m) + " exceeds the configured limit");
}

}  // namespace

std::vector<Element> SeededDraws::draw(std::size_t m, std::uint32_t n) {
  std::vector<Element> out(m);
  for (auto& e : out) e = static_cast<Element>(draw_below(rng_, n)) + 1;
  return out;
}

std::vector<Element> FixedDraws::draw(std::size_t m, std::uint32_t n) {
  if (seq_.size() - pos_ < m)
    throw Error(Errc::invalid_argument, "fixed draws: need " + std::to_string(m) + " values, " +
                                            std::to_string(seq_.size() - pos_) + " left");
  std::vector<Element> out(seq_.begin() + static_cast<std::ptrdiff_t>(pos_),
                           seq_.begin() + static_cast<std::ptrdiff_t>(pos_ + m));
  for (Element e : out) {
    if (e < 1 || e > n)
      throw Error(Errc::out_of_range, "fixed draws: value " + std::to_string(e) + " outside 1.." +
                                          std::to_string(n));
  }
  pos_ += m;
  return out;
}

// ---------------------------------------------------------------- Alice

Alice::Alice(SessionConfig cfg, BitString message, std::unique_ptr<DrawSource> draws)
    : cfg_(std::move(cfg)), message_(std::move(message)), draws_(std::move(draws)) {
  if (cfg_.s == 0) throw Error(Errc::invalid_argument, "amplification parameter s must be >= 1");
  if (!draws_) draws_ = std::make_unique<SeededDraws>(cfg_.seed);
}

void Alice::draw_round() {
  sequence_ = draws_->draw(m_, cfg_.partition.n());
  own_ = classify_sequence(cfg_.partition, sequence_);
  key_.reset();
}

std::uint64_t Alice::start() {
  if (phase_ != AlicePhase::idle) violation("alice: session already started");
  if (message_.empty()) throw Error(Errc::invalid_argument, "alice: empty message");
  m_ = static_cast<std::uint64_t>(message_.size()) * cfg_.s;
  check_m(m_, cfg_);
  draw_round();
  phase_ = AlicePhase::awaiting_tb;
  return m_;
}

AliceDecision Alice::on_tb(const BlockIndexList& tb) {
  if (phase_ != AlicePhase::awaiting_tb) violation("alice: T_B not expected now");
  if (tb.size() != m_)
    throw Error(Errc::length_mismatch, "alice: T_B has " + std::to_string(tb.size()) +
                                           " entries, expected m = " + std::to_string(m_));
  MatchList t = compare_lists(own_, tb);
  std::size_t key_bits = 0;
  if (plus_count(t) > 0) {
    key_ = derive_key(cfg_.partition, own_, t);
    key_bits = key_->bits.size();
  }
  if (message_.size() <= key_bits) {
    phase_ = AlicePhase::done;
    return Proceed{std::move(t), xor_cipher(message_, key_->bits)};
  }
  if (retries_ >= cfg_.max_retries) {
    phase_ = AlicePhase::failed;
    return Failed{};
  }
  ++retries_;
  if (cfg_.m_policy == MPolicy::double_m) m_ *= 2;
  check_m(m_, cfg_);
  draw_round();
  return Retry{m_};
}

// ---------------------------------------------------------------- Bob

Bob::Bob(SessionConfig cfg, std::unique_ptr<DrawSource> draws)
    : cfg_(std::move(cfg)), draws_(std::move(draws)) {
  if (!draws_) draws_ = std::make_unique<SeededDraws>(cfg_.seed);
}

BlockIndexList Bob::on_param(std::uint64_t m) {
  if (phase_ != BobPhase::awaiting_m && phase_ != BobPhase::awaiting_t)
    violation("bob: parameter m not expected now");
  check_m(m, cfg_);
  m_ = m;
  sequence_ = draws_->draw(m, cfg_.partition.n());
  own_ = classify_sequence(cfg_.partition, sequence_);
  key_.reset();
  phase_ = BobPhase::awaiting_t;
  return own_;
}

void Bob::on_t_list(const MatchList& t) {
  if (phase_ != BobPhase::awaiting_t) violation("bob: T not expected now");
  if (t.size() != m_)
    throw Error(Errc::length_mismatch, "bob: T has " + std::to_string(t.size()) +
                                           " marks, expected m = " + std::to_string(m_));
  t_ = t;
  phase_ = BobPhase::awaiting_ciphertext;
}

BitString Bob::on_ciphertext(const BitString& ciphertext) {
  if (phase_ != BobPhase::awaiting_ciphertext) violation("bob: ciphertext not expected now");
  try {
    key_ = derive_key(cfg_.partition, own_, t_);
    BitString plain = xor_cipher(ciphertext, key_->bits);
    phase_ = BobPhase::done;
    return plain;
  } catch (...) {
    phase_ = BobPhase::failed;
    throw;
  }
}

BitString Bob::on_t(const MatchList& t, const BitString& ciphertext) {
  on_t_list(t);
  return on_ciphertext(ciphertext);
}

// ---------------------------------------------------------------- drivers

void run_alice(Alice& alice, Channel& channel) {
  channel.send(make_param_m(alice.start()));
  for (;;) {
    const Frame f = channel.receive();
    if (f.type == FrameType::abort) throw Error(Errc::aborted, "alice: bob aborted the session");
    if (f.type != FrameType::tb_list)
      violation(std::string("alice: expected TB_LIST, got ") + to_string(f.type));

    const AliceDecision d = alice.on_tb(read_tb_list(f));
    if (const auto* go = std::get_if<Proceed>(&d)) {
      channel.send(make_t_list(go->t));
      channel.send(make_ciphertext(go->ciphertext));
      return;
    }
    if (const auto* again = std::get_if<Retry>(&d)) {
      channel.send(make_retry(again->m));
      continue;
    }
    channel.send(make_abort(AbortReason::retries_exhausted));
    throw Error(Errc::retries_exhausted, "alice: key still shorter than message after " +
                                             std::to_string(alice.retries()) + " retries");
  }
}

BitString run_bob(Bob& bob, Channel& channel) {
  try {
    for (;;) {
      const Frame f = channel.receive();
      if (f.type == FrameType::abort) {
        bob.on_abort();
        throw Error(Errc::aborted, "bob: alice aborted the session");
      }
      switch (bob.phase()) {
        case BobPhase::awaiting_m:
          if (f.type != FrameType::param_m)
            violation(std::string("bob: expected PARAM_M, got ") + to_string(f.type));
          channel.send(make_tb_list(bob.on_param(read_param_m(f))));
          break;
        case BobPhase::awaiting_t:
          if (f.type == FrameType::retry) {
            channel.send(make_tb_list(bob.on_param(read_retry(f))));
          } else if (f.type == FrameType::t_list) {
            bob.on_t_list(read_t_list(f));
          } else {
            violation(std::string("bob: expected T_LIST or RETRY, got ") + to_string(f.type));
          }
          break;
        case BobPhase::awaiting_ciphertext:
          if (f.type != FrameType::ciphertext)
            violation(std::string("bob: expected CIPHERTEXT, got ") + to_string(f.type));
          return bob.on_ciphertext(read_ciphertext(f));
        case BobPhase::done:
        case BobPhase::failed:
          violation("bob: session already finished");
      }
    }
  } catch (const Error& e) {
    bob.on_abort();
    if (e.code() == Errc::protocol_violation) {
      try {
        channel.send(make_abort(AbortReason::protocol_violation));
      } catch (const Error&) {
      }
    }
    throw;
  }
}

SessionResult run_session(Alice& alice, Bob& bob) {
  auto [alice_end, bob_end] = make_loopback_pair();
  SessionResult result;
  RecordingChannel recorder(*alice_end, result.transcript, Direction::alice_to_bob);

  std::exception_ptr bob_error;
  std::thread bob_thread([&, end = bob_end.get()] {
    try {
      result.plaintext = run_bob(bob, *end);
    } catch (...) {
      bob_error = std::current_exception();
    }
  });
  try {
    run_alice(alice, recorder);
  } catch (...) {
    alice_end->close();
    bob_thread.join();
    throw;
  }
  bob_thread.join();
  if (bob_error) std::rethrow_exception(bob_error);
  return result;
}

SessionResult run_session(const SessionConfig& alice_cfg, const SessionConfig& bob_cfg,
                          const BitString& message) {
  Alice alice(alice_cfg, message);
  Bob bob(bob_cfg);
  return run_session(alice, bob);
}

}  // namespace bcb12
