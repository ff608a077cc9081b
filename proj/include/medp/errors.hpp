#pragma once

#include <stdexcept>
#include <string>

namespace medp {

/// Malformed or contract-violating input. Maps to CLI exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A certified guarantee (value floor, congestion bound, oracle contract)
/// failed at runtime. This is always an internal bug. Exit code 3.
class GuaranteeViolation : public std::logic_error {
 public:
  explicit GuaranteeViolation(const std::string& what) : std::logic_error(what) {}
};

/// An exact oracle refused an instance above its size guard. Exit code 4.
class GuardExceeded : public std::runtime_error {
 public:
  explicit GuardExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// An internal invariant that the algorithm relies on did not hold.
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace medp
