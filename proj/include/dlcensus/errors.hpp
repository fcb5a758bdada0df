#pragma once

#include <stdexcept>
#include <string>

namespace dlc {

// Caller supplied something outside the contract: non-prime, out of range,
// malformed file. Maps to CLI exit code 2.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A result that must hold exactly did not. Maps to CLI exit code 3.
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace dlc
