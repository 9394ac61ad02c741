#include "bcb12/partition.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "bcb12/error.hpp"
#include "bcb12/random.hpp"

namespace bcb12 {

namespace {

[[noreturn]] void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

constexpr int kRejectionRounds = 64;

}  // namespace

SetPartition SetPartition::create(std::uint32_t n, std::uint32_t k, std::vector<BlockIndex> block_of) {
  if (n == 0) fail(Errc::invalid_partition, "partition: n must be at least 1");
  if (k == 0 || k > n)
    fail(Errc::invalid_partition, "partition: need 1 <= k <= n, got k=" + std::to_string(k) +
                                      " n=" + std::to_string(n));
  if (block_of.size() != n)
    fail(Errc::invalid_partition, "partition: expected " + std::to_string(n) + " labels, got " +
                                      std::to_string(block_of.size()));

  SetPartition p;
  p.n_ = n;
  p.k_ = k;
  p.blocks_.resize(k);
  for (Element e = 1; e <= n; ++e) {
    const BlockIndex j = block_of[e - 1];
    if (j < 1 || j > k)
      fail(Errc::invalid_partition, "partition: element " + std::to_string(e) +
                                        " has block index " + std::to_string(j) + " outside 1.." +
                                        std::to_string(k));
    p.blocks_[j - 1].push_back(e);
  }
  for (BlockIndex j = 1; j <= k; ++j) {
    if (p.blocks_[j - 1].empty())
      fail(Errc::invalid_partition, "partition: block " + std::to_string(j) + " is empty");
  }
  p.block_of_ = std::move(block_of);
  return p;
}

BlockIndex SetPartition::block_of(Element e) const {
  if (e < 1 || e > n_)
    fail(Errc::out_of_range,
         "element " + std::to_string(e) + " outside 1.." + std::to_string(n_));
  return block_of_[e - 1];
}

std::span<const Element> SetPartition::block(BlockIndex j) const {
  if (j < 1 || j > k_)
    fail(Errc::out_of_range,
         "block index " + std::to_string(j) + " outside 1.." + std::to_string(k_));
  return blocks_[j - 1];
}

BlockSizeProfile SetPartition::size_profile() const {
  BlockSizeProfile profile;
  profile.sizes.reserve(k_);
  for (const auto& b : blocks_) profile.sizes.push_back(static_cast<std::uint32_t>(b.size()));
  return profile;
}

SetPartition new_partition(std::uint32_t n, std::uint32_t k, std::vector<BlockIndex> block_of) {
  return SetPartition::create(n, k, std::move(block_of));
}

SetPartition random_partition(std::uint32_t n, std::uint32_t k, std::uint64_t seed) {
  if (n == 0 || k == 0 || k > n)
    fail(Errc::invalid_argument, "random_partition: need 1 <= k <= n");

  Rng rng(seed);
  std::vector<BlockIndex> labels(n);
  std::vector<std::uint32_t> seen(k + 1);
  for (int round = 0; round < kRejectionRounds; ++round) {
    std::fill(seen.begin(), seen.end(), 0);
    std::uint32_t used = 0;
    for (auto& label : labels) {
      label = static_cast<BlockIndex>(draw_below(rng, k)) + 1;
      if (seen[label]++ == 0) ++used;
    }
    if (used == k) return SetPartition::create(n, k, std::move(labels));
  }

  // Fallback: one random element per block, the rest uniform.
  std::vector<Element> order(n);
  std::iota(order.begin(), order.end(), Element{1});
  for (std::uint32_t i = n - 1; i > 0; --i) {
    const auto r = static_cast<std::uint32_t>(draw_below(rng, i + 1));
    std::swap(order[i], order[r]);
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    labels[order[i] - 1] =
        i < k ? i + 1 : static_cast<BlockIndex>(draw_below(rng, k)) + 1;
  }
  return SetPartition::create(n, k, std::move(labels));
}

SetPartition canonicalize(const SetPartition& p) {
  std::vector<BlockIndex> relabel(p.k() + 1, 0);
  BlockIndex next = 1;
  std::vector<BlockIndex> labels;
  labels.reserve(p.n());
  for (BlockIndex j : p.labels()) {
    if (relabel[j] == 0) relabel[j] = next++;
    labels.push_back(relabel[j]);
  }
  return SetPartition::create(p.n(), p.k(), std::move(labels));
}

BigInt stirling2(std::uint32_t n, std::uint32_t k) {
  if (k > n) return 0;
  if (n == 0) return 1;  // k == 0 here
  if (k == 0) return 0;
  // row[j] holds S(i, j) for the current i.
  std::vector<BigInt> row(k + 1, 0);
  row[0] = 1;
  for (std::uint32_t i = 1; i <= n; ++i) {
    const std::uint32_t top = std::min(i, k);
    for (std::uint32_t j = top; j >= 1; --j) row[j] = j * row[j] + row[j - 1];
    row[0] = 0;
  }
  return row[k];
}

PartitionEnumerator::PartitionEnumerator(std::uint32_t n, std::uint32_t k) : n_(n), k_(k) {
  if (n == 0 || k == 0 || k > n)
    fail(Errc::invalid_argument, "enumerate: need 1 <= k <= n");
  rgs_.assign(n, 1);
  for (std::uint32_t j = 2; j <= k; ++j) rgs_[n - k + j - 1] = j;
  prefix_max_.resize(n);
  BlockIndex m = 0;
  for (std::uint32_t i = 0; i < n; ++i) prefix_max_[i] = m = std::max(m, rgs_[i]);
}

SetPartition PartitionEnumerator::partition() const {
  if (done_) fail(Errc::out_of_range, "enumerate: iterator exhausted");
  return SetPartition::create(n_, k_, rgs_);
}

bool PartitionEnumerator::next() {
  if (done_) return false;
  for (std::uint32_t i = n_ - 1; i >= 1; --i) {
    const BlockIndex before = prefix_max_[i - 1];
    const BlockIndex ceiling = std::min<BlockIndex>(before + 1, k_);
    const std::uint32_t remaining = n_ - 1 - i;
    for (BlockIndex v = rgs_[i] + 1; v <= ceiling; ++v) {
      const BlockIndex m = std::max(before, v);
      if (remaining < k_ - m) continue;
      rgs_[i] = v;
      prefix_max_[i] = m;
      // Smallest completion that still opens blocks m+1..k.
      const std::uint32_t opened_from = n_ - (k_ - m);
      for (std::uint32_t t = i + 1; t < n_; ++t) {
        rgs_[t] = t < opened_from ? 1 : m + (t - opened_from) + 1;
        prefix_max_[t] = std::max(prefix_max_[t - 1], rgs_[t]);
      }
      return true;
    }
  }
  done_ = true;
  rgs_.clear();
  return false;
}

std::vector<SetPartition> enumerate_partitions(std::uint32_t n, std::uint32_t k) {
  if (n == 0 || k == 0 || k > n)
    fail(Errc::invalid_argument, "enumerate: need 1 <= k <= n");
  const BigInt count = stirling2(n, k);
  if (count > kEnumerationLimit)
    fail(Errc::overflow, "enumerate: S(" + std::to_string(n) + "," + std::to_string(k) + ") = " +
                             count.str() + " exceeds the enumeration limit");
  std::vector<SetPartition> out;
  out.reserve(count.convert_to<std::size_t>());
  PartitionEnumerator it(n, k);
  do {
    out.push_back(it.partition());
  } while (it.next());
  return out;
}

Ratio match_probability(const SetPartition& p) {
  std::uint64_t num = 0;
  for (auto s : p.size_profile().sizes) num += std::uint64_t{s} * s;
  const std::uint64_t den = std::uint64_t{p.n()} * p.n();
  const std::uint64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

std::string serialize_partition(const SetPartition& p) {
  std::ostringstream os;
  os << "n=" << p.n() << " k=" << p.k() << '\n';
  for (BlockIndex j = 1; j <= p.k(); ++j) {
    os << j << ':';
    for (Element e : p.block(j)) os << ' ' << e;
    os << '\n';
  }
  return os.str();
}

namespace {

std::uint32_t parse_u32(std::string_view s, std::size_t line_no) {
  std::uint32_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    fail(Errc::parse_error,
         "partition line " + std::to_string(line_no) + ": bad integer '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

SetPartition parse_partition(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  while (!lines.empty() && split_ws(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) fail(Errc::parse_error, "partition: empty input");

  const auto header = split_ws(lines[0]);
  if (header.size() != 2 || !header[0].starts_with("n=") || !header[1].starts_with("k="))
    fail(Errc::parse_error, "partition line 1: expected 'n=<int> k=<int>'");
  const std::uint32_t n = parse_u32(header[0].substr(2), 1);
  const std::uint32_t k = parse_u32(header[1].substr(2), 1);
  if (n == 0 || k == 0 || k > n) fail(Errc::parse_error, "partition line 1: need 1 <= k <= n");
  if (lines.size() != std::size_t{k} + 1)
    fail(Errc::parse_error, "partition: expected " + std::to_string(k) + " block lines, got " +
                                std::to_string(lines.size() - 1));

  std::vector<BlockIndex> labels(n, 0);
  for (BlockIndex j = 1; j <= k; ++j) {
    const std::string_view line = lines[j];
    const auto colon = line.find(':');
    if (colon == std::string_view::npos)
      fail(Errc::parse_error, "partition line " + std::to_string(j + 1) + ": missing ':'");
    const auto index_tok = split_ws(line.substr(0, colon));
    if (index_tok.size() != 1 || parse_u32(index_tok[0], j + 1) != j)
      fail(Errc::parse_error,
           "partition line " + std::to_string(j + 1) + ": expected block " + std::to_string(j));
    for (auto tok : split_ws(line.substr(colon + 1))) {
      const Element e = parse_u32(tok, j + 1);
      if (e < 1 || e > n)
        fail(Errc::parse_error, "partition: element " + std::to_string(e) + " outside 1.." +
                                    std::to_string(n));
      if (labels[e - 1] != 0)
        fail(Errc::parse_error, "partition: element " + std::to_string(e) + " listed twice");
      labels[e - 1] = j;
    }
  }
  for (Element e = 1; e <= n; ++e) {
    if (labels[e - 1] == 0)
      fail(Errc::parse_error, "partition: element " + std::to_string(e) + " missing");
  }
  try {
    return SetPartition::create(n, k, std::move(labels));
  } catch (const Error& err) {
    fail(Errc::parse_error, err.what());
  }
}

SetPartition read_partition_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::invalid_argument, "cannot open partition file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_partition(ss.str());
}

void write_partition_file(const std::string& path, const SetPartition& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::invalid_argument, "cannot write partition file " + path);
  out << serialize_partition(p);
}

std::ostream& operator<<(std::ostream& os, const SetPartition& p) {
  os << '{';
  for (BlockIndex j = 1; j <= p.k(); ++j) {
    os << (j > 1 ? " {" : "{");
    bool first = true;
    for (Element e : p.block(j)) {
      os << (first ? "" : ",") << e;
      first = false;
    }
    os << '}';
  }
  return os << '}';
}

}  // namespace bcb12
