#pragma once

#include <string>

#include "bcb12/bitstring.hpp"

namespace bcb12 {

inline constexpr double kDefaultAlpha = 0.01;

enum class Verdict { pass, fail, not_applicable };

const char* to_string(Verdict v) noexcept;

struct TestReport {
  std::string name;
  double statistic = 0.0;
  double p_value = 0.0;  // 0 when not applicable
  Verdict verdict = Verdict::fail;

  bool passed() const noexcept { return verdict == Verdict::pass; }
};

/// Frequency test: S = sum(2b - 1), p = erfc(|S| / sqrt(2L)). Statistic is S.
/// Throws Error{invalid_argument} on empty input.
TestReport monobit(const BitString& bits, double alpha = kDefaultAlpha);

/// Runs test: V = number of runs, pi = fraction of ones,
/// p = erfc(|V - 2L pi(1-pi)| / (2 sqrt(2L) pi(1-pi))). Not applicable when
/// |pi - 1/2| >= 2/sqrt(L). Statistic is V. Throws Error{invalid_argument}
/// when L < 2.
TestReport runs_test(const BitString& bits, double alpha = kDefaultAlpha);

/// Shannon entropy of the byte histogram, in bits per byte.
/// Throws Error{length_mismatch} unless the length is a multiple of 8.
double byte_entropy(const BitString& bits);

}  // namespace bcb12
