#include "bcb12/error.hpp"

namespace bcb12 {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::invalid_partition: return "invalid partition";
    case Errc::parse_error: return "parse error";
    case Errc::out_of_range: return "out of range";
    case Errc::length_mismatch: return "length mismatch";
    case Errc::no_match: return "no matching position";
    case Errc::key_too_short: return "key shorter than input";
    case Errc::overflow: return "count overflow";
    case Errc::bad_magic: return "bad magic";
    case Errc::unknown_version: return "unknown version";
    case Errc::unknown_type: return "unknown frame type";
    case Errc::truncated: return "truncated frame";
    case Errc::protocol_violation: return "protocol violation";
    case Errc::retries_exhausted: return "retries exhausted";
    case Errc::aborted: return "session aborted by peer";
    case Errc::peer_closed: return "peer closed";
    case Errc::timeout: return "timeout";
    case Errc::transport: return "transport error";
  }
  return "unknown error";
}

}  // namespace bcb12
