#pragma once

#include <stdexcept>
#include <string>

namespace rsp {

/// Violated precondition on an argument (invalid arc, q <= 0, non-Littlewood input, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request exceeding a configured size limit (order, degree, sample count).
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void limit_exceeded(const std::string& what, unsigned long long value,
                                        unsigned long long limit) {
  throw ResourceLimitError(what + " " + std::to_string(value) + " exceeds the configured limit " +
                           std::to_string(limit));
}

}  // namespace detail
}  // namespace rsp
