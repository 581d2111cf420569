#pragma once

#include <optional>

#include "fraclimit/error.hpp"

namespace fraclimit::testing {

// Kind of the fraclimit::Error thrown by body, nullopt if none.
template <class F>
std::optional<ErrorKind> thrown_kind(F&& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace fraclimit::testing
