#include "bcb12/randstat.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>

#include "bcb12/error.hpp"

namespace bcb12 {

namespace {

Verdict judge(double p, double alpha) { return p >= alpha ? Verdict::pass : Verdict::fail; }

}  // namespace

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::not_applicable: return "N/A";
  }
  return "?";
}

TestReport monobit(const BitString& bits, double alpha) {
  if (bits.empty()) throw Error(Errc::invalid_argument, "monobit: empty input");
  const auto len = static_cast<double>(bits.size());
  const double s = 2.0 * static_cast<double>(bits.count_ones()) - len;
  const double p = std::erfc(std::abs(s) / std::sqrt(2.0 * len));
  return {"monobit", s, p, judge(p, alpha)};
}

TestReport runs_test(const BitString& bits, double alpha) {
  if (bits.size() < 2) throw Error(Errc::invalid_argument, "runs: need at least 2 bits");
  const auto len = static_cast<double>(bits.size());
  const double pi = static_cast<double>(bits.count_ones()) / len;

  std::size_t runs = 1;
  for (std::size_t i = 1; i < bits.size(); ++i) runs += bits[i] != bits[i - 1];
  const auto v = static_cast<double>(runs);

  // |pi - 1/2| >= 2 / sqrt(L)  <=>  (2 * ones - L)^2 >= 16 L, exact in integers.
  const auto excess = static_cast<long double>(2 * static_cast<std::int64_t>(bits.count_ones()) -
                                               static_cast<std::int64_t>(bits.size()));
  if (excess * excess >= 16.0L * static_cast<long double>(bits.size()))
    return {"runs", v, 0.0, Verdict::not_applicable};

  const double spread = pi * (1.0 - pi);
  const double p = std::erfc(std::abs(v - 2.0 * len * spread) / (2.0 * std::sqrt(2.0 * len) * spread));
  return {"runs", v, p, judge(p, alpha)};
}

double byte_entropy(const BitString& bits) {
  if (bits.size() % 8 != 0)
    throw Error(Errc::length_mismatch, "byte_entropy: length is not a multiple of 8");
  const auto bytes = bits.pack();
  if (bytes.empty()) return 0.0;
  std::array<std::size_t, 256> hist{};
  for (auto b : bytes) ++hist[b];
  const auto total = static_cast<double>(bytes.size());
  double h = 0.0;
  for (auto c : hist) {
    if (c == 0) continue;
    const double q = static_cast<double>(c) / total;
    h -= q * std::log2(q);
  }
  return h;
}

}  // namespace bcb12
