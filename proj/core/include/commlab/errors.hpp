#pragma once

#include <stdexcept>
#include <string>

namespace commlab {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user-supplied parameter (CLI flag, spec file, constructor argument).
struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Conditioning event has zero mass under the distribution.
struct EmptyConditioning : Error {
  explicit EmptyConditioning(const std::string& msg) : Error(msg) {}
};

// Requested exact computation would exceed the enumeration budget.
struct TooLargeToEnumerate : Error {
  explicit TooLargeToEnumerate(const std::string& msg) : Error(msg) {}
};

}  // namespace commlab
