#pragma once

#include <stdexcept>
#include <string>

namespace bcb12 {

enum class Errc {
  invalid_argument,
  invalid_partition,
  parse_error,
  out_of_range,
  length_mismatch,
  no_match,
  key_too_short,
  overflow,
  // wire
  bad_magic,
  unknown_version,
  unknown_type,
  truncated,
  // session
  protocol_violation,
  retries_exhausted,
  aborted,
  // transport
  peer_closed,
  timeout,
  transport,
};

const char* to_string(Errc code) noexcept;

/// Every failure in the library is reported as an Error carrying a code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace bcb12
