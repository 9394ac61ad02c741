#include "bcb12/transcript.hpp"

#include <fstream>
#include <iterator>

#include "bcb12/error.hpp"

namespace bcb12 {

const char* to_string(Direction d) noexcept {
  return d == Direction::alice_to_bob ? "alice->bob" : "bob->alice";
}

std::vector<std::uint8_t> Transcript::bytes() const {
  std::vector<std::uint8_t> out;
  for (const auto& e : entries_) {
    const auto wire = encode_frame(e.frame);
    out.insert(out.end(), wire.begin(), wire.end());
  }
  return out;
}

Transcript Transcript::parse(std::span<const std::uint8_t> bytes) {
  Transcript t;
  while (!bytes.empty()) {
    auto [frame, rest] = decode_frame(bytes);
    const Direction d =
        frame.type == FrameType::tb_list ? Direction::bob_to_alice : Direction::alice_to_bob;
    t.record(d, frame);
    bytes = rest;
  }
  return t;
}

Transcript Transcript::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_argument, "cannot open transcript " + path);
  const std::vector<std::uint8_t> data{std::istreambuf_iterator<char>(in), {}};
  return parse(data);
}

void Transcript::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::invalid_argument, "cannot write transcript " + path);
  const auto data = bytes();
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

}  // namespace bcb12
