#pragma once

#include <doctest.h>

#include "bcb12/error.hpp"

/// Runs fn and returns the code of the bcb12::Error it throws.
template <typename Fn>
bcb12::Errc code_of(Fn&& fn) {
  try {
    fn();
  } catch (const bcb12::Error& e) {
    return e.code();
  }
  FAIL("expected bcb12::Error");
  return bcb12::Errc::invalid_argument;
}
