#pragma once

#include <functional>

#include <gtest/gtest.h>

#include "densecode/errors.hpp"

namespace densecode::testing {

/// Kind of the densecode::Error thrown by f; fails the test if none is.
inline ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected densecode::Error";
  return ErrorKind::ParseError;
}

}  // namespace densecode::testing
