#include <doctest.h>

#include <thread>

#include "bcb12/channel.hpp"
#include "test_util.hpp"

using namespace bcb12;
using namespace std::chrono_literals;

namespace {

std::vector<Frame> script() {
  return {make_param_m(432), make_tb_list(BlockIndexList{7, 1, 13}), make_t_list(match_list_from_string("+-+")),
          make_ciphertext(BitString::from_ascii("101")), make_abort(AbortReason::internal)};
}

}  // namespace

TEST_CASE("loopback preserves order in both directions") {
  auto [a, b] = make_loopback_pair();
  for (const auto& f : script()) a->send(f);
  for (const auto& f : script()) CHECK(b->receive() == f);
  b->send(make_retry(9));
  CHECK(read_retry(a->receive()) == 9);
}

TEST_CASE("loopback reassembles frames from one-byte reads") {
  for (std::size_t chunk : {1u, 3u, 10u, 11u, 4096u}) {
    auto [a, b] = make_loopback_pair();
    b->set_read_chunk(chunk);
    for (const auto& f : script()) a->send(f);
    for (const auto& f : script()) CHECK(b->receive() == f);
  }
}

TEST_CASE("loopback raw bytes split across writes") {
  auto [a, b] = make_loopback_pair();
  const auto bytes = encode_frame(make_param_m(8));
  std::thread writer([&, &a = a] {
    for (auto byte : bytes) {
      a->send_raw(std::span(&byte, 1));
      std::this_thread::sleep_for(1ms);
    }
  });
  CHECK(read_param_m(b->receive()) == 8);
  writer.join();
}

TEST_CASE("loopback timeout and close") {
  auto [a, b] = make_loopback_pair();
  b->set_timeout(50ms);
  CHECK(code_of([&b = b] { b->receive(); }) == Errc::timeout);
  a->close();
  CHECK(code_of([&b = b] { b->receive(); }) == Errc::peer_closed);
}

TEST_CASE("loopback surfaces wire errors") {
  auto [a, b] = make_loopback_pair();
  a->send_raw(std::vector<std::uint8_t>{'X', 'C', '1', '2', 1, 1, 0, 0, 0, 0});
  CHECK(code_of([&b = b] { b->receive(); }) == Errc::bad_magic);
}

TEST_CASE("loopback: close with a partial frame buffered is peer_closed") {
  auto [a, b] = make_loopback_pair();
  const auto bytes = encode_frame(make_param_m(8));
  a->send_raw(std::span(bytes).first(5));
  a->close();
  CHECK(code_of([&b = b] { b->receive(); }) == Errc::peer_closed);
}

TEST_CASE("tcp on an ephemeral port") {
  TcpListener listener("127.0.0.1", 0);
  REQUIRE(listener.port() != 0);
  std::thread server([&] {
    auto ch = listener.accept();
    for (int i = 0; i < 5; ++i) ch->send(ch->receive());
  });
  auto client = TcpChannel::connect("127.0.0.1", listener.port(), 5000ms);
  for (const auto& f : script()) client->send(f);
  for (const auto& f : script()) CHECK(client->receive() == f);
  server.join();
  client->set_timeout(2000ms);
  CHECK(code_of([&] { client->receive(); }) == Errc::peer_closed);
}

TEST_CASE("tcp connect to a closed port times out") {
  std::uint16_t port = 0;
  {
    TcpListener l("127.0.0.1", 0);
    port = l.port();
  }
  const auto e = code_of([&] { TcpChannel::connect("127.0.0.1", port, 300ms); });
  CHECK((e == Errc::timeout || e == Errc::transport));
}

TEST_CASE("parse_endpoint") {
  CHECK(parse_endpoint("127.0.0.1:4000") == std::pair<std::string, std::uint16_t>{"127.0.0.1", 4000});
  CHECK(parse_endpoint("localhost:1") == std::pair<std::string, std::uint16_t>{"localhost", 1});
  CHECK(code_of([] { parse_endpoint("localhost"); }) == Errc::invalid_argument);
  CHECK(code_of([] { parse_endpoint("h:70000"); }) == Errc::invalid_argument);
  CHECK(code_of([] { parse_endpoint("h:x1"); }) == Errc::invalid_argument);
  CHECK(code_of([] { parse_endpoint(":80"); }) == Errc::invalid_argument);
}

TEST_CASE("recording channel captures both directions") {
  auto [a, b] = make_loopback_pair();
  Transcript t;
  RecordingChannel rec(*a, t, Direction::alice_to_bob);
  rec.send(make_param_m(4));
  b->receive();
  b->send(make_tb_list(BlockIndexList{1, 2, 1, 1}));
  rec.receive();
  rec.send(make_t_list(match_list_from_string("+--+")));
  REQUIRE(t.entries().size() == 3);
  CHECK(t.entries()[0].direction == Direction::alice_to_bob);
  CHECK(t.entries()[1].direction == Direction::bob_to_alice);
  CHECK(t.entries()[2].direction == Direction::alice_to_bob);
  CHECK(Transcript::parse(t.bytes()) == t);
}
