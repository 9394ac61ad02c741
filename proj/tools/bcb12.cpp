// bcb12: command-line front end for the set-partition key-agreement protocol.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "bcb12/bitstring.hpp"
#include "bcb12/channel.hpp"
#include "bcb12/error.hpp"
#include "bcb12/eve.hpp"
#include "bcb12/partition.hpp"
#include "bcb12/protocol.hpp"
#include "bcb12/randstat.hpp"

using namespace bcb12;

namespace {

enum Exit : int { ok = 0, usage = 2, protocol = 3, transport = 4, no_hit = 5 };

int exit_code(Errc e) {
  switch (e) {
    case Errc::protocol_violation:
    case Errc::retries_exhausted:
    case Errc::aborted:
    case Errc::no_match:
    case Errc::bad_magic:
    case Errc::unknown_version:
    case Errc::unknown_type:
    case Errc::truncated:
      return Exit::protocol;
    case Errc::peer_closed:
    case Errc::timeout:
    case Errc::transport:
      return Exit::transport;
    default:
      return Exit::usage;
  }
}

struct Global {
  std::optional<std::uint64_t> seed;
  std::string log_level;
};

/// Mixes the user seed with a role tag so two roles given the same --seed
/// still draw independent sequences.
std::uint64_t role_seed(const Global& g, std::uint64_t role) {
  std::uint64_t base = g.seed ? *g.seed : std::random_device{}() * 0x100000001ull ^ std::random_device{}();
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(role), static_cast<std::uint32_t>(role >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_argument, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  if (path == "-") {
    std::cout.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::invalid_argument, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_text(const std::string& path, const std::string& text) {
  write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<Element> read_sequence(const std::string& path) {
  const auto bytes = read_bytes(path);
  std::istringstream is(std::string(bytes.begin(), bytes.end()));
  std::vector<Element> out;
  std::string token;
  while (is >> token) {
    if (token.back() == ',') token.pop_back();
    if (token.empty()) continue;
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      out.push_back(static_cast<Element>(v));
    } catch (const std::exception&) {
      throw Error(Errc::parse_error, path + ": not an integer: '" + token + "'");
    }
  }
  return out;
}

MPolicy parse_policy(const std::string& s) { return s == "keep" ? MPolicy::keep : MPolicy::double_m; }

// ------------------------------------------------------------------ commands

struct GenPartitionArgs {
  std::uint32_t n = 0, k = 0;
  std::string out = "-";
};

int cmd_gen_partition(const GenPartitionArgs& a, const Global& g) {
  const auto p = random_partition(a.n, a.k, role_seed(g, 0));
  write_text(a.out, serialize_partition(p));
  spdlog::info("generated a {}-block partition of [{}]", a.k, a.n);
  return Exit::ok;
}

struct EnumerateArgs {
  std::uint32_t n = 0, k = 0;
  bool list = false;
  std::optional<std::uint32_t> growth_to;
};

int cmd_enumerate(const EnumerateArgs& a) {
  std::cout << "S(" << a.n << "," << a.k << ") = " << stirling2(a.n, a.k) << '\n';
  if (a.list) {
    for (PartitionEnumerator it(a.n, a.k); !it.done(); it.next()) std::cout << it.partition() << '\n';
  }
  if (a.growth_to) {
    std::cout << "n\tS(n," << a.k << ")\tcumulative\n";
    for (const auto& row : search_space_growth(a.k, *a.growth_to))
      std::cout << row.n << '\t' << row.level << '\t' << row.cumulative << '\n';
  }
  return Exit::ok;
}

struct AliceArgs {
  std::string partition, message, connect, transcript, alice_seq, retry = "double";
  std::uint32_t s = 2, max_retries = 8;
  double timeout = 30.0;
};

int cmd_alice(const AliceArgs& a, const Global& g) {
  SessionConfig cfg{read_partition_file(a.partition)};
  cfg.s = a.s;
  cfg.seed = role_seed(g, 1);
  cfg.max_retries = a.max_retries;
  cfg.m_policy = parse_policy(a.retry);
  const auto [host, port] = parse_endpoint(a.connect);
  const auto message = text_to_bits(read_bytes(a.message));
  std::unique_ptr<DrawSource> draws;
  if (!a.alice_seq.empty()) draws = std::make_unique<FixedDraws>(read_sequence(a.alice_seq));
  Alice alice(cfg, message, std::move(draws));

  const auto timeout = std::chrono::milliseconds(static_cast<std::int64_t>(a.timeout * 1000));
  auto channel = TcpChannel::connect(host, port, timeout);
  channel->set_timeout(timeout);
  Transcript transcript;
  RecordingChannel recorder(*channel, transcript, Direction::alice_to_bob);
  std::optional<Error> failure;
  try {
    run_alice(alice, recorder);
  } catch (const Error& e) {
    failure = e;
  }
  if (!a.transcript.empty()) {
    const auto bytes = transcript.bytes();
    write_bytes(a.transcript, bytes);
  }
  if (failure) throw *failure;
  spdlog::info("sent {} message bits with m = {} after {} retries", message.size(), alice.m(), alice.retries());
  channel->close();
  return Exit::ok;
}

struct BobArgs {
  std::string partition, listen, out = "-", bob_seq;
  std::uint32_t sessions = 1;
  double timeout = 30.0;
  std::string port_file;
};

std::string session_path(const std::string& out, std::uint32_t index, std::uint32_t sessions) {
  if (sessions == 1 || out == "-") return out;
  return out + "." + std::to_string(index);
}

int cmd_bob(const BobArgs& a, const Global& g) {
  const auto partition = read_partition_file(a.partition);
  std::optional<std::vector<Element>> fixed;
  if (!a.bob_seq.empty()) fixed = read_sequence(a.bob_seq);
  const auto [host, port] = parse_endpoint(a.listen);
  const auto timeout = std::chrono::milliseconds(static_cast<std::int64_t>(a.timeout * 1000));

  TcpListener listener(host, port);
  spdlog::info("listening on {}:{}", host, listener.port());
  if (!a.port_file.empty()) write_text(a.port_file, std::to_string(listener.port()) + "\n");

  std::mutex out_mutex;
  std::atomic<int> worst{Exit::ok};
  std::vector<std::thread> workers;
  for (std::uint32_t i = 0; a.sessions == 0 || i < a.sessions; ++i) {
    auto channel = listener.accept();
    channel->set_timeout(timeout);
    SessionConfig cfg{partition};
    cfg.seed = role_seed(g, 2 + i);
    std::unique_ptr<DrawSource> draws;
    if (fixed) draws = std::make_unique<FixedDraws>(*fixed);
    workers.emplace_back([&, i, cfg = std::move(cfg), draws = std::move(draws),
                          channel = std::move(channel)]() mutable {
      try {
        Bob bob(std::move(cfg), std::move(draws));
        const auto plain = run_bob(bob, *channel);
        const auto bytes = bits_to_text(plain);
        std::lock_guard lock(out_mutex);
        write_bytes(session_path(a.out, i, a.sessions), bytes);
        spdlog::info("session {}: received {} bits", i, plain.size());
      } catch (const Error& e) {
        spdlog::error("session {}: {}", i, e.what());
        const int code = exit_code(e.code());
        int prev = worst.load();
        while (prev < code && !worst.compare_exchange_weak(prev, code)) {
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  return worst.load();
}

struct CipherArgs {
  std::string key, in, out = "-";
};

int cmd_cipher(const CipherArgs& a) {
  const auto key = read_bitstring_file(a.key);
  const auto input = read_bitstring_file(a.in);
  const auto result = xor_cipher(input, key);
  write_text(a.out, result.to_ascii() + "\n");
  return Exit::ok;
}

struct StatsArgs {
  std::string key;
  double alpha = kDefaultAlpha;
};

int cmd_stats(const StatsArgs& a) {
  const auto key = read_bitstring_file(a.key);
  std::cout << "test\tstatistic\tp\tverdict\n";
  for (const auto& r : {monobit(key, a.alpha), runs_test(key, a.alpha)})
    std::cout << r.name << '\t' << r.statistic << '\t' << r.p_value << '\t' << to_string(r.verdict) << '\n';
  if (key.size() % 8 == 0) std::cout << "byte_entropy\t" << byte_entropy(key) << "\t-\t-\n";
  return Exit::ok;
}

struct AttackArgs {
  std::string transcript, crib;
  std::uint32_t k = 0, n_max = 0, target_n = 20;
  std::uint64_t max_candidates = 0;
  double time_limit = 0;
  bool all_labelings = false;
};

int cmd_attack(const AttackArgs& a) {
  const auto transcript = Transcript::read_file(a.transcript);
  AttackBudget budget;
  budget.n_max = a.n_max == 0 ? a.k : a.n_max;
  if (a.max_candidates > 0) budget.max_partitions = a.max_candidates;
  if (a.time_limit > 0) budget.time_limit = std::chrono::duration<double>(a.time_limit);
  AttackOptions options;
  if (!a.crib.empty()) options.crib = read_bitstring_file(a.crib);
  options.labeling = a.all_labelings ? Labeling::all : Labeling::canonical;
  const auto result = eve_enumerate_keys(transcript, a.k, budget, options);
  std::cout << attack_report(result, a.target_n);
  if (options.crib && !result.hit) return Exit::no_hit;
  return Exit::ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Set-partition key agreement: protocol roles, cipher tools, statistics and attack harness"};
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("--seed", g.seed, "Seed for every random choice; omit for a fresh random seed");
  app.add_option("--log-level", g.log_level, "trace|debug|info|warn|error|off (default: $BCB12_LOG or warn)")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  GenPartitionArgs gp;
  auto* gen = app.add_subcommand("gen-partition", "Draw a random k-block partition of [n]");
  gen->add_option("--n", gp.n, "Ground set size")->required()->check(CLI::Range(1u, 1u << 16));
  gen->add_option("--k", gp.k, "Number of blocks")->required()->check(CLI::Range(1u, 65535u));
  gen->add_option("--out", gp.out, "Output file, - for stdout");

  EnumerateArgs en;
  auto* enumerate = app.add_subcommand("enumerate", "Print S(n,k) and optionally every partition");
  enumerate->add_option("--n", en.n, "Ground set size")->required();
  enumerate->add_option("--k", en.k, "Number of blocks")->required();
  enumerate->add_flag("--list", en.list, "List every partition in canonical order");
  enumerate->add_option("--growth", en.growth_to, "Also print S(m,k) and running totals for m = k..N");

  AliceArgs al;
  auto* alice = app.add_subcommand("alice", "Send a message as Alice");
  alice->add_option("--partition", al.partition, "Shared partition file")->required();
  alice->add_option("--message", al.message, "Message file, - for stdin")->required();
  alice->add_option("--connect", al.connect, "Bob's host:port")->required();
  alice->add_option("--s", al.s, "Amplification parameter, m = L_M * s")->check(CLI::PositiveNumber);
  alice->add_option("--retry", al.retry, "m policy on retry")->check(CLI::IsMember({"keep", "double"}));
  alice->add_option("--max-retries", al.max_retries, "Rounds before giving up");
  alice->add_option("--alice-seq", al.alice_seq, "Replay these draws instead of random ones");
  alice->add_option("--transcript", al.transcript, "Write the recorded wire bytes here");
  alice->add_option("--timeout", al.timeout, "Connect and receive timeout in seconds")->check(CLI::PositiveNumber);

  BobArgs bo;
  auto* bob = app.add_subcommand("bob", "Receive messages as Bob");
  bob->add_option("--partition", bo.partition, "Shared partition file")->required();
  bob->add_option("--listen", bo.listen, "host:port to listen on; port 0 picks one")->required();
  bob->add_option("--out", bo.out, "Plaintext output, - for stdout; .<i> is appended per session when serving several");
  bob->add_option("--bob-seq", bo.bob_seq, "Replay these draws instead of random ones");
  bob->add_option("--sessions", bo.sessions, "Sessions to serve before exiting, 0 for no limit");
  bob->add_option("--timeout", bo.timeout, "Receive timeout in seconds")->check(CLI::PositiveNumber);
  bob->add_option("--port-file", bo.port_file, "Write the bound port here once listening");

  CipherArgs enc_args, dec_args;
  auto* enc = app.add_subcommand("encrypt", "XOR a bitstring with a key prefix");
  auto* dec = app.add_subcommand("decrypt", "XOR a ciphertext bitstring with a key prefix");
  for (auto [cmd, args] : {std::pair{enc, &enc_args}, std::pair{dec, &dec_args}}) {
    cmd->add_option("--key", args->key, "Key bitstring file")->required();
    cmd->add_option("--in", args->in, "Input bitstring file")->required();
    cmd->add_option("--out", args->out, "Output bitstring file, - for stdout");
  }

  StatsArgs st;
  auto* stats = app.add_subcommand("stats", "Randomness statistics for a key");
  stats->add_option("--key", st.key, "Key bitstring file")->required();
  stats->add_option("--alpha", st.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));

  AttackArgs at;
  auto* attack = app.add_subcommand("attack", "Exhaustive partition search against a transcript");
  attack->add_option("--transcript", at.transcript, "Recorded wire bytes")->required();
  attack->add_option("--k", at.k, "Number of blocks")->required()->check(CLI::PositiveNumber);
  attack->add_option("--n-max", at.n_max, "Largest ground set to try (default k)");
  attack->add_option("--max-candidates", at.max_candidates, "Stop after this many partitions");
  attack->add_option("--crib", at.crib, "Known plaintext prefix, bitstring file");
  attack->add_option("--time-limit", at.time_limit, "Stop after this many seconds");
  attack->add_option("--target-n", at.target_n, "Project the search time up to this n");
  attack->add_flag("--all-labelings", at.all_labelings, "Try every block ordering, not only the canonical one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? Exit::ok : Exit::usage;
  }

  auto logger = spdlog::stderr_color_mt("bcb12");
  logger->set_pattern("bcb12: %l: %v");
  spdlog::set_default_logger(logger);
  std::string level = g.log_level;
  if (level.empty()) {
    const char* env = std::getenv("BCB12_LOG");
    level = env != nullptr ? env : "warn";
  }
  spdlog::set_level(spdlog::level::from_str(level));

  try {
    if (*gen) return cmd_gen_partition(gp, g);
    if (*enumerate) return cmd_enumerate(en);
    if (*alice) return cmd_alice(al, g);
    if (*bob) return cmd_bob(bo, g);
    if (*enc) return cmd_cipher(enc_args);
    if (*dec) return cmd_cipher(dec_args);
    if (*stats) return cmd_stats(st);
    if (*attack) return cmd_attack(at);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return Exit::usage;
  }
  return Exit::usage;
}
