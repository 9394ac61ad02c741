#include "bcb12/channel.hpp"

#include <cerrno>
#include <charconv>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "bcb12/error.hpp"

namespace bcb12 {

using Clock = std::chrono::steady_clock;

void StreamChannel::send(const Frame& f) {
  const auto wire = encode_frame(f);
  write_bytes(wire);
}

Frame StreamChannel::receive() {
  const auto deadline = Clock::now() + timeout_;
  std::uint8_t buf[16 * 1024];
  for (;;) {
    if (auto f = decoder_.next()) return std::move(*f);
    const std::size_t got = read_some(buf, deadline);
    if (got == 0) {
      throw Error(Errc::peer_closed, decoder_.buffered() > 0 ? "peer closed mid-frame" : "peer closed");
    }
    decoder_.feed(std::span(buf, got));
  }
}

// ---------------------------------------------------------------- loopback

struct LoopbackChannel::Pipe {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::uint8_t> data;
  bool closed = false;
};

LoopbackChannel::LoopbackChannel(std::shared_ptr<Pipe> in, std::shared_ptr<Pipe> out)
    : in_(std::move(in)), out_(std::move(out)) {}

LoopbackChannel::~LoopbackChannel() { close(); }

void LoopbackChannel::close() {
  for (auto* pipe : {in_.get(), out_.get()}) {
    {
      std::lock_guard lock(pipe->mu);
      pipe->closed = true;
    }
    pipe->cv.notify_all();
  }
}

void LoopbackChannel::write_bytes(std::span<const std::uint8_t> bytes) {
  {
    std::lock_guard lock(out_->mu);
    if (out_->closed) throw Error(Errc::peer_closed, "loopback: write to closed pipe");
    out_->data.insert(out_->data.end(), bytes.begin(), bytes.end());
  }
  out_->cv.notify_all();
}

std::size_t LoopbackChannel::read_some(std::span<std::uint8_t> out, Clock::time_point deadline) {
  std::unique_lock lock(in_->mu);
  if (!in_->cv.wait_until(lock, deadline, [&] { return !in_->data.empty() || in_->closed; }))
    throw Error(Errc::timeout, "loopback: receive timed out");
  const std::size_t n = std::min({out.size(), in_->data.size(), read_chunk_});
  std::copy_n(in_->data.begin(), n, out.begin());
  in_->data.erase(in_->data.begin(), in_->data.begin() + static_cast<std::ptrdiff_t>(n));
  return n;
}

std::pair<std::unique_ptr<LoopbackChannel>, std::unique_ptr<LoopbackChannel>> make_loopback_pair() {
  auto a_to_b = std::make_shared<LoopbackChannel::Pipe>();
  auto b_to_a = std::make_shared<LoopbackChannel::Pipe>();
  return {std::make_unique<LoopbackChannel>(b_to_a, a_to_b),
          std::make_unique<LoopbackChannel>(a_to_b, b_to_a)};
}

// ---------------------------------------------------------------- tcp

namespace {

[[noreturn]] void sys_fail(const std::string& what) {
  throw Error(Errc::transport, what + ": " + std::strerror(errno));
}

int wait_fd(int fd, short events, Clock::time_point deadline) {
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (left.count() <= 0) return 0;
    pollfd p{fd, events, 0};
    const int rc = ::poll(&p, 1, static_cast<int>(std::min<long long>(left.count(), 1'000'000)));
    if (rc < 0 && errno == EINTR) continue;
    if (rc < 0) sys_fail("poll");
    if (rc > 0) return rc;
  }
}

struct AddrInfo {
  addrinfo* head = nullptr;
  ~AddrInfo() {
    if (head) ::freeaddrinfo(head);
  }
};

void resolve(AddrInfo& out, const std::string& host, std::uint16_t port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  const std::string service = std::to_string(port);
  const int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &out.head);
  if (rc != 0) throw Error(Errc::transport, "resolve " + host + ": " + ::gai_strerror(rc));
}

}  // namespace

TcpChannel::~TcpChannel() { close(); }

void TcpChannel::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

std::unique_ptr<TcpChannel> TcpChannel::connect(const std::string& host, std::uint16_t port,
                                                std::chrono::milliseconds timeout) {
  AddrInfo ai;
  resolve(ai, host, port, false);
  const auto deadline = Clock::now() + timeout;
  std::string last = "no addresses";
  // The listener may still be starting; retry refused connections until the deadline.
  while (Clock::now() < deadline) {
    for (addrinfo* a = ai.head; a; a = a->ai_next) {
      const int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) {
        const int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        auto ch = std::make_unique<TcpChannel>(fd);
        ch->set_timeout(timeout);
        return ch;
      }
      last = std::strerror(errno);
      ::close(fd);
    }
    ::usleep(50'000);
  }
  throw Error(Errc::transport, "connect " + host + ":" + std::to_string(port) + ": " + last);
}

void TcpChannel::write_bytes(std::span<const std::uint8_t> bytes) {
  if (fd_ < 0) throw Error(Errc::peer_closed, "tcp: channel closed");
  const auto deadline = Clock::now() + timeout_;
  while (!bytes.empty()) {
    const ssize_t n = ::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == EAGAIN || errno == EWOULDBLOCK) {
        if (wait_fd(fd_, POLLOUT, deadline) == 0) throw Error(Errc::timeout, "tcp: send timed out");
        continue;
      }
      if (errno == EPIPE || errno == ECONNRESET) throw Error(Errc::peer_closed, "tcp: peer closed");
      sys_fail("send");
    }
    bytes = bytes.subspan(static_cast<std::size_t>(n));
  }
}

std::size_t TcpChannel::read_some(std::span<std::uint8_t> out, Clock::time_point deadline) {
  if (fd_ < 0) throw Error(Errc::peer_closed, "tcp: channel closed");
  for (;;) {
    if (wait_fd(fd_, POLLIN, deadline) == 0) throw Error(Errc::timeout, "tcp: receive timed out");
    const ssize_t n = ::recv(fd_, out.data(), out.size(), 0);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      if (errno == ECONNRESET) return 0;
      sys_fail("recv");
    }
    return static_cast<std::size_t>(n);
  }
}

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
  AddrInfo ai;
  resolve(ai, host, port, true);
  for (addrinfo* a = ai.head; a; a = a->ai_next) {
    const int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, a->ai_addr, a->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
      fd_ = fd;
      break;
    }
    ::close(fd);
  }
  if (fd_ < 0) sys_fail("listen on " + host + ":" + std::to_string(port));

  sockaddr_storage bound{};
  socklen_t len = sizeof bound;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  if (bound.ss_family == AF_INET)
    port_ = ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
  else
    port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpChannel> TcpListener::accept() {
  for (;;) {
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      sys_fail("accept");
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return std::make_unique<TcpChannel>(fd);
  }
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos)
    throw Error(Errc::invalid_argument, "expected host:port, got '" + text + "'");
  std::string host = text.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  if (host.empty()) throw Error(Errc::invalid_argument, "missing host in '" + text + "'");
  const std::string port_text = text.substr(colon + 1);
  unsigned port = 0;
  const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port > 65535 || port_text.empty())
    throw Error(Errc::invalid_argument, "bad port in '" + text + "'");
  return {host, static_cast<std::uint16_t>(port)};
}

// ---------------------------------------------------------------- recording

void RecordingChannel::send(const Frame& f) {
  inner_.send(f);
  transcript_.record(outbound_, f);
}

Frame RecordingChannel::receive() {
  Frame f = inner_.receive();
  transcript_.record(outbound_ == Direction::alice_to_bob ? Direction::bob_to_alice
                                                          : Direction::alice_to_bob,
                     f);
  return f;
}

}  // namespace bcb12
