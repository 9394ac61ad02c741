#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>

#include "bcb12/frame.hpp"
#include "bcb12/transcript.hpp"

namespace bcb12 {

inline constexpr std::chrono::milliseconds kDefaultTimeout{30'000};

/// Ordered, reliable, bidirectional frame pipe between two parties. One
/// reader and one writer per direction.
class Channel {
 public:
  virtual ~Channel() = default;

  virtual void send(const Frame& f) = 0;

  /// Blocks until a whole frame arrives. Throws Error{peer_closed} or
  /// Error{timeout}; wire errors propagate from the decoder.
  virtual Frame receive() = 0;

  virtual void close() {}

  void set_timeout(std::chrono::milliseconds t) noexcept { timeout_ = t; }
  std::chrono::milliseconds timeout() const noexcept { return timeout_; }

 protected:
  std::chrono::milliseconds timeout_ = kDefaultTimeout;
};

/// Channel over a byte stream; frames are reassembled from arbitrary reads.
class StreamChannel : public Channel {
 public:
  void send(const Frame& f) override;
  Frame receive() override;

  /// Writes raw bytes, bypassing frame encoding.
  void send_raw(std::span<const std::uint8_t> bytes) { write_bytes(bytes); }

 protected:
  virtual void write_bytes(std::span<const std::uint8_t> bytes) = 0;
  /// Reads at least one byte into `out`, returns count; 0 means peer closed.
  virtual std::size_t read_some(std::span<std::uint8_t> out,
                                std::chrono::steady_clock::time_point deadline) = 0;

 private:
  FrameDecoder decoder_;
};

class LoopbackChannel final : public StreamChannel {
 public:
  struct Pipe;

  LoopbackChannel(std::shared_ptr<Pipe> in, std::shared_ptr<Pipe> out);
  ~LoopbackChannel() override;

  void close() override;

  /// Caps each read at `n` bytes, to exercise reassembly.
  void set_read_chunk(std::size_t n) noexcept { read_chunk_ = n == 0 ? 1 : n; }

 protected:
  void write_bytes(std::span<const std::uint8_t> bytes) override;
  std::size_t read_some(std::span<std::uint8_t> out,
                        std::chrono::steady_clock::time_point deadline) override;

 private:
  std::shared_ptr<Pipe> in_;
  std::shared_ptr<Pipe> out_;
  std::size_t read_chunk_ = 64 * 1024;
};

/// Two connected in-memory endpoints.
std::pair<std::unique_ptr<LoopbackChannel>, std::unique_ptr<LoopbackChannel>> make_loopback_pair();

class TcpChannel final : public StreamChannel {
 public:
  explicit TcpChannel(int fd) noexcept : fd_(fd) {}
  ~TcpChannel() override;
  TcpChannel(const TcpChannel&) = delete;
  TcpChannel& operator=(const TcpChannel&) = delete;

  static std::unique_ptr<TcpChannel> connect(const std::string& host, std::uint16_t port,
                                             std::chrono::milliseconds timeout = kDefaultTimeout);

  void close() override;

 protected:
  void write_bytes(std::span<const std::uint8_t> bytes) override;
  std::size_t read_some(std::span<std::uint8_t> out,
                        std::chrono::steady_clock::time_point deadline) override;

 private:
  int fd_;
};

class TcpListener {
 public:
  /// Port 0 binds an ephemeral port; see port().
  TcpListener(const std::string& host, std::uint16_t port);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  std::unique_ptr<TcpChannel> accept();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

/// "host:port" -> pair. Throws Error{invalid_argument}.
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& text);

/// Forwards to an inner channel and records every frame in both directions.
class RecordingChannel final : public Channel {
 public:
  RecordingChannel(Channel& inner, Transcript& transcript, Direction outbound)
      : inner_(inner), transcript_(transcript), outbound_(outbound) {}

  void send(const Frame& f) override;
  Frame receive() override;
  void close() override { inner_.close(); }

 private:
  Channel& inner_;
  Transcript& transcript_;
  Direction outbound_;
};

}  // namespace bcb12
