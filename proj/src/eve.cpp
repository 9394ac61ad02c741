#include "bcb12/eve.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "bcb12/error.hpp"

namespace bcb12 {

namespace {

using Clock = std::chrono::steady_clock;

BigInt factorial(std::uint32_t k) {
  BigInt f = 1;
  for (std::uint32_t i = 2; i <= k; ++i) f *= i;
  return f;
}

std::string key_of(const BitString& bits) {
  const auto packed = bits.pack();
  return {packed.begin(), packed.end()};
}

/// Crib check: does ciphertext ^ key start with the crib?
bool matches_crib(const BitString& ciphertext, const BitString& key, const BitString& crib) {
  for (std::size_t i = 0; i < crib.size(); ++i) {
    if ((ciphertext[i] != key[i]) != crib[i]) return false;
  }
  return true;
}

std::string format_seconds(double s) {
  std::ostringstream os;
  if (s < 1e-3)
    os << std::setprecision(3) << s * 1e6 << " us";
  else if (s < 1.0)
    os << std::setprecision(3) << s * 1e3 << " ms";
  else if (s < 3600.0)
    os << std::setprecision(3) << s << " s";
  else if (s < 86400.0 * 365.25)
    os << std::setprecision(3) << s / 86400.0 << " days";
  else
    os << std::setprecision(3) << s / (86400.0 * 365.25) << " years";
  return os.str();
}

}  // namespace

const char* to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::completed: return "completed";
    case StopReason::partition_limit: return "partition limit reached";
    case StopReason::time_limit: return "time limit reached";
  }
  return "?";
}

InterceptedSession intercept(const Transcript& transcript) {
  InterceptedSession s;
  bool have_m = false, have_tb = false, have_t = false, have_c = false;
  for (const auto& entry : transcript.entries()) {
    const Frame& f = entry.frame;
    switch (f.type) {
      case FrameType::param_m:
        s.m = read_param_m(f);
        have_m = true;
        break;
      case FrameType::retry:
        s.m = read_retry(f);
        break;
      case FrameType::tb_list:
        s.tb = read_tb_list(f);
        have_tb = true;
        break;
      case FrameType::t_list:
        s.t = read_t_list(f);
        have_t = true;
        break;
      case FrameType::ciphertext:
        s.ciphertext = read_ciphertext(f);
        have_c = true;
        break;
      case FrameType::abort:
        break;
    }
  }
  if (!have_m || !have_tb || !have_t || !have_c)
    throw Error(Errc::invalid_argument,
                "transcript: need PARAM_M, TB_LIST, T_LIST and CIPHERTEXT frames");
  if (s.tb.size() != s.m || s.t.size() != s.m)
    throw Error(Errc::invalid_argument, "transcript: T_B / T lengths disagree with m");
  if (s.ciphertext.size() > 8 * plus_count(s.t))
    throw Error(Errc::invalid_argument, "transcript: ciphertext longer than the key T allows");
  return s;
}

AttackResult eve_enumerate_keys(const Transcript& transcript, std::uint32_t k,
                                const AttackBudget& budget, const AttackOptions& options) {
  return eve_enumerate_keys(intercept(transcript), k, budget, options);
}

AttackResult eve_enumerate_keys(const InterceptedSession& session, std::uint32_t k,
                                const AttackBudget& budget, const AttackOptions& options) {
  if (k == 0) throw Error(Errc::invalid_argument, "attack: k must be at least 1");
  if (budget.n_max == 0 || budget.max_partitions == 0 || budget.time_limit.count() <= 0)
    throw Error(Errc::invalid_argument, "attack: budget must be positive");
  if (std::any_of(session.tb.begin(), session.tb.end(), [&](BlockIndex j) { return j < 1 || j > k; }))
    throw Error(Errc::invalid_argument, "attack: T_B references a block outside 1..k");
  if (options.crib && options.crib->size() > session.ciphertext.size())
    throw Error(Errc::invalid_argument, "attack: crib longer than the ciphertext");

  AttackResult result;
  result.k = k;
  result.labeling = options.labeling;
  result.crib_supplied = options.crib.has_value();

  const auto start = Clock::now();
  const auto deadline_exceeded = [&] { return Clock::now() - start >= budget.time_limit; };
  std::unordered_map<std::string, std::size_t> seen;
  const std::size_t prefix_bits = session.ciphertext.size();
  const BigInt orderings = options.labeling == Labeling::all ? factorial(k) : BigInt(1);

  std::vector<BlockIndex> perm(k);
  std::vector<BlockIndex> labels;

  for (std::uint32_t n = k; n <= budget.n_max && result.stop == StopReason::completed; ++n) {
    LevelStats level;
    level.n = n;
    level.search_space = stirling2(n, k) * orderings;
    const auto level_start = Clock::now();

    for (PartitionEnumerator it(n, k); !it.done(); it.next()) {
      std::iota(perm.begin(), perm.end(), BlockIndex{1});
      do {
        if (result.examined >= budget.max_partitions) {
          result.stop = StopReason::partition_limit;
          break;
        }
        if ((result.examined & 1023u) == 0 && deadline_exceeded()) {
          result.stop = StopReason::time_limit;
          break;
        }
        const auto rgs = it.current();
        labels.assign(rgs.size(), 0);
        for (std::size_t i = 0; i < rgs.size(); ++i) labels[i] = perm[rgs[i] - 1];
        const SetPartition candidate = SetPartition::create(n, k, labels);
        const KeyMaterial key = derive_key(candidate, session.tb, session.t);
        ++result.examined;
        ++level.examined;

        BitString prefix = key.bits.prefix(prefix_bits);
        auto [pos, inserted] = seen.try_emplace(key_of(prefix), result.candidates.size());
        if (!inserted) continue;
        ++level.new_candidates;
        Candidate c{std::move(prefix), n, labels, false};
        if (options.crib && matches_crib(session.ciphertext, c.key_prefix, *options.crib)) {
          c.hit = true;
          result.hit = true;
        }
        result.candidates.push_back(std::move(c));
      } while (options.labeling == Labeling::all && std::next_permutation(perm.begin(), perm.end()));
      if (result.stop != StopReason::completed) break;
    }
    level.seconds = std::chrono::duration<double>(Clock::now() - level_start).count();
    result.levels.push_back(std::move(level));
  }
  result.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

std::vector<GrowthRow> search_space_growth(std::uint32_t k, std::uint32_t n_to, Labeling labeling) {
  std::vector<GrowthRow> rows;
  const BigInt orderings = labeling == Labeling::all ? factorial(k) : BigInt(1);
  BigInt cumulative = 0;
  for (std::uint32_t n = k; n <= n_to; ++n) {
    BigInt level = stirling2(n, k) * orderings;
    cumulative += level;
    rows.push_back({n, std::move(level), cumulative});
  }
  return rows;
}

std::string attack_report(const AttackResult& result, std::uint32_t target_n) {
  std::ostringstream os;
  os << "attack: k=" << result.k << " labeling="
     << (result.labeling == Labeling::all ? "all" : "canonical") << " examined=" << result.examined
     << " distinct candidates=" << result.candidates.size() << " stop=" << to_string(result.stop)
     << " elapsed=" << format_seconds(result.elapsed_seconds) << '\n';

  os << std::left << std::setw(5) << "n" << std::setw(24) << "search space" << std::setw(16)
     << "examined" << std::setw(16) << "new keys" << "time\n";
  for (const auto& level : result.levels) {
    os << std::setw(5) << level.n << std::setw(24) << level.search_space.str() << std::setw(16)
       << level.examined << std::setw(16) << level.new_candidates << format_seconds(level.seconds)
       << '\n';
  }

  if (result.crib_supplied) {
    const auto hit = std::find_if(result.candidates.begin(), result.candidates.end(),
                                  [](const Candidate& c) { return c.hit; });
    if (hit == result.candidates.end()) {
      os << "crib: no candidate matched\n";
    } else {
      os << "crib: HIT candidate #" << (hit - result.candidates.begin()) + 1 << " at n=" << hit->n
         << " partition " << SetPartition::create(hit->n, result.k, hit->labels) << '\n';
    }
  }

  if (result.k == 0 || result.examined == 0 || result.elapsed_seconds <= 0.0) return os.str();

  const double rate = static_cast<double>(result.examined) / result.elapsed_seconds;
  os << "projection at " << std::setprecision(4) << rate << " partitions/s:\n";
  os << std::setw(5) << "n" << std::setw(28) << "level" << std::setw(28) << "cumulative"
     << "est. time\n";
  for (const auto& row : search_space_growth(result.k, std::max(target_n, result.k), result.labeling)) {
    const double secs = row.cumulative.convert_to<double>() / rate;
    os << std::setw(5) << row.n << std::setw(28) << row.level.str() << std::setw(28)
       << row.cumulative.str() << format_seconds(secs) << '\n';
  }
  return os.str();
}

}  // namespace bcb12
