#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "bcb12/error.hpp"
#include "bcb12/partition.hpp"
#include "bcb12/random.hpp"
#include "golden.hpp"
#include "test_util.hpp"

using namespace bcb12;

namespace {

SetPartition singletons(std::uint32_t n) {
  std::vector<BlockIndex> labels(n);
  for (std::uint32_t i = 0; i < n; ++i) labels[i] = i + 1;
  return SetPartition::create(n, n, labels);
}

}  // namespace

TEST_CASE("new_partition accepts the golden partition") {
  const auto p = golden::partition();
  CHECK(p.n() == 20);
  CHECK(p.k() == 13);
  CHECK(p.block_of(6) == 7);
  CHECK(p.block_of(17) == 13);
  CHECK(p.size_profile().total() == 20);
}

TEST_CASE("new_partition validation") {
  CHECK_NOTHROW(new_partition(3, 3, {1, 2, 3}));
  CHECK(code_of([] { new_partition(3, 2, {1, 1, 1}); }) == Errc::invalid_partition);
  CHECK(code_of([] { new_partition(3, 4, {1, 2, 3}); }) == Errc::invalid_partition);
  CHECK(code_of([] { new_partition(3, 2, {1, 2, 3}); }) == Errc::invalid_partition);
  CHECK(code_of([] { new_partition(3, 2, {0, 1, 2}); }) == Errc::invalid_partition);
  CHECK(code_of([] { new_partition(3, 2, {1, 2}); }) == Errc::invalid_partition);
  CHECK(code_of([] { new_partition(0, 0, {}); }) == Errc::invalid_partition);
}

TEST_CASE("block_index_of") {
  const auto p = golden::partition();
  CHECK(block_index_of(p, 12) == 7);
  CHECK(block_index_of(p, 1) == 1);
  CHECK(block_index_of(singletons(5), 5) == 5);
  CHECK(code_of([&] { block_index_of(p, 0); }) == Errc::out_of_range);
  CHECK(code_of([&] { block_index_of(p, 21); }) == Errc::out_of_range);
}

TEST_CASE("random_partition forced cases and determinism") {
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    CHECK(random_partition(5, 5, seed).k() == 5);
    const auto all = random_partition(5, 5, seed);
    for (BlockIndex j = 1; j <= 5; ++j) CHECK(all.block(j).size() == 1);
    const auto one = random_partition(5, 1, seed);
    CHECK(one.block(1).size() == 5);
  }
  CHECK(random_partition(20, 13, 7) == random_partition(20, 13, 7));
  CHECK_FALSE(random_partition(20, 13, 7) == random_partition(20, 13, 8));
  CHECK(code_of([] { random_partition(3, 4, 1); }) == Errc::invalid_argument);
}

TEST_CASE("random_partition always has k nonempty blocks") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    const auto n = static_cast<std::uint32_t>(draw_below(rng, 64)) + 1;
    const auto k = static_cast<std::uint32_t>(draw_below(rng, n)) + 1;
    const auto p = random_partition(n, k, seed);
    REQUIRE(p.k() == k);
    for (BlockIndex j = 1; j <= k; ++j) CHECK(!p.block(j).empty());
  }
}

TEST_CASE("random_partition rejection path is uniform over surjections") {
  // n=4, k=2 has 14 surjections; each should come up ~1/14 of the time.
  std::map<std::vector<BlockIndex>, int> counts;
  const int trials = 14000;
  for (int s = 0; s < trials; ++s) {
    const auto p = random_partition(4, 2, static_cast<std::uint64_t>(s));
    counts[{p.labels().begin(), p.labels().end()}]++;
  }
  CHECK(counts.size() == 14);
  for (const auto& [labels, c] : counts) CHECK(std::abs(c - 1000) < 5 * 30);  // sd ~ 30
}

TEST_CASE("enumerate_partitions small cases") {
  const auto p32 = enumerate_partitions(3, 2);
  REQUIRE(p32.size() == 3);
  // RGS order: 112 -> {1,2}{3}; 121 -> {1,3}{2}; 122 -> {1}{2,3}
  CHECK(std::vector<BlockIndex>(p32[0].labels().begin(), p32[0].labels().end()) == std::vector<BlockIndex>{1, 1, 2});
  CHECK(std::vector<BlockIndex>(p32[1].labels().begin(), p32[1].labels().end()) == std::vector<BlockIndex>{1, 2, 1});
  CHECK(std::vector<BlockIndex>(p32[2].labels().begin(), p32[2].labels().end()) == std::vector<BlockIndex>{1, 2, 2});
  CHECK(enumerate_partitions(4, 4).size() == 1);
  CHECK(enumerate_partitions(4, 2).size() == 7);
  CHECK(enumerate_partitions(1, 1).size() == 1);
}

TEST_CASE("enumeration matches the brute-force labeling oracle, in order") {
  for (std::uint32_t n = 1; n <= 7; ++n) {
    for (std::uint32_t k = 1; k <= n; ++k) {
      const auto oracle = golden::brute_force_rgs(n, k);
      const auto got = enumerate_partitions(n, k);
      REQUIRE(got.size() == oracle.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(std::equal(got[i].labels().begin(), got[i].labels().end(), oracle[i].begin(), oracle[i].end()));
      }
    }
  }
}

TEST_CASE("enumeration count equals S(n,k) and RGS order is strictly increasing") {
  for (std::uint32_t n = 1; n <= 10; ++n) {
    for (std::uint32_t k = 1; k <= n; ++k) {
      std::uint64_t count = 0;
      std::vector<BlockIndex> prev;
      for (PartitionEnumerator it(n, k); !it.done(); it.next()) {
        std::vector<BlockIndex> cur(it.current().begin(), it.current().end());
        if (!prev.empty()) CHECK(std::lexicographical_compare(prev.begin(), prev.end(), cur.begin(), cur.end()));
        prev = std::move(cur);
        ++count;
      }
      CHECK(BigInt(count) == stirling2(n, k));
    }
  }
}

TEST_CASE("enumerate guard") {
  CHECK(code_of([] { enumerate_partitions(20, 13); }) == Errc::overflow);
  CHECK(code_of([] { enumerate_partitions(3, 4); }) == Errc::invalid_argument);
}

TEST_CASE("stirling2") {
  CHECK(stirling2(4, 2) == 7);
  for (std::uint32_t n = 0; n <= 12; ++n) CHECK(stirling2(n, n) == 1);
  CHECK(stirling2(0, 0) == 1);
  CHECK(stirling2(5, 0) == 0);
  CHECK(stirling2(3, 5) == 0);
  CHECK(stirling2(10, 3) == 9330);
  // Frozen from the inclusion-exclusion form sum_i (-1)^i C(k,i) (k-i)^n / k!.
  CHECK(stirling2(20, 13) == BigInt("61068660380"));
  CHECK(stirling2(16, 13) == 165620);
}

TEST_CASE("match_probability") {
  const auto q = match_probability(golden::partition());
  CHECK(q == Ratio{19, 200});  // 38/400
  CHECK(q.to_double() == doctest::Approx(0.095));
  CHECK(match_probability(singletons(7)) == Ratio{1, 7});
  CHECK(match_probability(new_partition(5, 1, {1, 1, 1, 1, 1})) == Ratio{1, 1});
}

TEST_CASE("match_probability equals the empirical match rate") {
  const auto p = golden::partition();
  const double q = match_probability(p).to_double();
  Rng rng(2024);
  const int draws = 200'000;
  int hits = 0;
  for (int i = 0; i < draws; ++i) {
    const auto a = static_cast<Element>(draw_below(rng, p.n())) + 1;
    const auto b = static_cast<Element>(draw_below(rng, p.n())) + 1;
    hits += p.block_of(a) == p.block_of(b);
  }
  const double se = std::sqrt(q * (1 - q) / draws);
  CHECK(std::abs(static_cast<double>(hits) / draws - q) < 3 * se);
}

TEST_CASE("serialize / parse") {
  const auto p = golden::partition();
  const auto text = serialize_partition(p);
  CHECK(text.starts_with("n=20 k=13\n1: 1\n"));
  CHECK(text.find("7: 6 8 12\n") != std::string::npos);
  CHECK(parse_partition(text) == p);

  CHECK(code_of([] { parse_partition("n=3 k=2\n1: 1 2\n2: 2 3\n"); }) == Errc::parse_error);
  CHECK(code_of([] { parse_partition("n=3 k=2\n1: 1\n2: 3\n"); }) == Errc::parse_error);
  CHECK(code_of([] { parse_partition("n=3 k=2\n2: 1 2\n1: 3\n"); }) == Errc::parse_error);
  CHECK(code_of([] { parse_partition("n=3 k=2\n1: 1 2 3\n2:\n"); }) == Errc::parse_error);
  CHECK(code_of([] { parse_partition("n=3\n1: 1 2 3\n"); }) == Errc::parse_error);
  CHECK(code_of([] { parse_partition("n=3 k=1\n1: 1 2 x\n"); }) == Errc::parse_error);
  CHECK(code_of([] { parse_partition(""); }) == Errc::parse_error);
}

TEST_CASE("parse(serialize(p)) == p for random partitions up to n = 64") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed ^ 0x5eed);
    const auto n = static_cast<std::uint32_t>(draw_below(rng, 64)) + 1;
    const auto k = static_cast<std::uint32_t>(draw_below(rng, n)) + 1;
    const auto p = random_partition(n, k, seed);
    CHECK(parse_partition(serialize_partition(p)) == p);
  }
}

TEST_CASE("canonicalize relabels by first appearance") {
  const auto c = canonicalize(golden::partition());
  CHECK(c.block(1).size() == 1);
  CHECK(c.block_of(1) == 1);
  CHECK(c.block_of(2) == 2);
  CHECK(c.block_of(3) == 3);
  CHECK(c.block_of(4) == 4);
  CHECK(c.block_of(17) == 4);
  CHECK(match_probability(c) == match_probability(golden::partition()));
}
