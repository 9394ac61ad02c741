#include "bcb12/keyder.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "bcb12/error.hpp"

namespace bcb12 {

std::size_t plus_count(const MatchList& t) noexcept {
  return static_cast<std::size_t>(std::count(t.begin(), t.end(), Mark::plus));
}

std::string to_string(const MatchList& t) {
  std::string s;
  s.reserve(t.size());
  for (Mark m : t) s.push_back(m == Mark::plus ? '+' : '-');
  return s;
}

MatchList match_list_from_string(std::string_view marks) {
  MatchList t;
  t.reserve(marks.size());
  for (char c : marks) {
    if (c == '+')
      t.push_back(Mark::plus);
    else if (c == '-')
      t.push_back(Mark::minus);
    else
      throw Error(Errc::parse_error, std::string("match list: unexpected character '") + c + "'");
  }
  return t;
}

const char* to_string(FKind kind) noexcept {
  switch (kind) {
    case FKind::sum: return "SUM";
    case FKind::product: return "PRODUCT";
    case FKind::max: return "MAX";
  }
  return "?";
}

FKind parse_fkind(std::string_view name) {
  if (name == "SUM") return FKind::sum;
  if (name == "PRODUCT") return FKind::product;
  if (name == "MAX") return FKind::max;
  throw Error(Errc::parse_error, "unknown f kind '" + std::string(name) + "'");
}

BlockIndexList classify_sequence(const SetPartition& p, std::span<const Element> seq) {
  BlockIndexList out;
  out.reserve(seq.size());
  for (Element e : seq) out.push_back(p.block_of(e));
  return out;
}

MatchList compare_lists(std::span<const BlockIndex> ta, std::span<const BlockIndex> tb) {
  if (ta.size() != tb.size())
    throw Error(Errc::length_mismatch, "compare_lists: lengths " + std::to_string(ta.size()) +
                                           " and " + std::to_string(tb.size()));
  MatchList t(ta.size());
  for (std::size_t i = 0; i < ta.size(); ++i) t[i] = ta[i] == tb[i] ? Mark::plus : Mark::minus;
  return t;
}

FKind select_f(BlockIndex j) noexcept {
  switch (j & 3u) {
    case 2: return FKind::product;
    case 1: return FKind::max;
    default: return FKind::sum;
  }
}

std::uint64_t eval_f(FKind kind, const SetPartition& p, BlockIndex j) {
  const auto block = p.block(j);
  switch (kind) {
    case FKind::sum: {
      std::uint64_t s = 0;
      for (Element e : block) s += e;
      return s;
    }
    case FKind::product: {
      std::uint64_t prod = 1;
      for (Element e : block) prod *= e;
      return prod;
    }
    case FKind::max:
      return block.back();
  }
  return 0;
}

BitString encode_values(std::span<const std::uint64_t> values) {
  BitString bits;
  bits.reserve(values.size() * 8);
  for (auto v : values) bits.append_uint(v & 0xffu, 8);
  return bits;
}

KeyMaterial derive_key(const SetPartition& p, std::span<const BlockIndex> own, const MatchList& t) {
  if (own.size() != t.size())
    throw Error(Errc::length_mismatch, "derive_key: own list has " + std::to_string(own.size()) +
                                           " entries, match list " + std::to_string(t.size()));
  const auto first = std::find(t.begin(), t.end(), Mark::plus);
  if (first == t.end()) throw Error(Errc::no_match, "derive_key: match list has no '+'");

  KeyMaterial key;
  key.f_kind = select_f(own[static_cast<std::size_t>(first - t.begin())]);

  // f(A_j) is needed once per block, not once per PLUS.
  std::vector<std::uint64_t> per_block(p.k() + 1);
  std::vector<bool> known(p.k() + 1, false);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] != Mark::plus) continue;
    const BlockIndex j = own[i];
    if (j < 1 || j > p.k())
      throw Error(Errc::out_of_range, "derive_key: block index " + std::to_string(j) +
                                          " outside 1.." + std::to_string(p.k()));
    if (!known[j]) {
      per_block[j] = eval_f(key.f_kind, p, j);
      known[j] = true;
    }
    key.values.push_back(per_block[j]);
  }
  key.bits = encode_values(key.values);
  return key;
}

std::string format_key_dump(const KeyMaterial& key) {
  std::ostringstream os;
  os << "f=" << to_string(key.f_kind) << '\n';
  for (std::size_t i = 0; i < key.values.size(); ++i) os << (i ? " " : "") << key.values[i];
  os << '\n' << key.bits.to_ascii() << '\n';
  return os.str();
}

KeyMaterial parse_key_dump(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string f_line, values_line, bits_line;
  if (!std::getline(is, f_line) || !f_line.starts_with("f="))
    throw Error(Errc::parse_error, "key dump: expected 'f=<KIND>' on line 1");
  std::getline(is, values_line);
  std::getline(is, bits_line);

  KeyMaterial key;
  key.f_kind = parse_fkind(std::string_view(f_line).substr(2));
  std::istringstream vs(values_line);
  std::string tok;
  while (vs >> tok) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      throw Error(Errc::parse_error, "key dump: bad value '" + tok + "'");
    key.values.push_back(v);
  }
  key.bits = BitString::from_ascii(bits_line);
  if (key.bits != encode_values(key.values))
    throw Error(Errc::parse_error, "key dump: bit line does not encode the value line");
  return key;
}

}  // namespace bcb12
