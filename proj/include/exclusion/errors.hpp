#pragma once

#include <stdexcept>
#include <string>

namespace exclusion {

// Invalid input: out-of-range parameters, malformed states, dimension mismatch.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// The requested state space or matrix is too large for the chosen code path.
class CapacityError : public std::length_error {
 public:
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ParameterError(what);
}

}  // namespace detail
}  // namespace exclusion
