#pragma once

#include <stdexcept>
#include <string>

namespace sqtsp {

/// Malformed input or a violated precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// LP or circulation problem without a feasible point.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A proved structural property failed on a concrete instance. Carries the
/// name of the check and a witness (vertex/edge ids and values).
class InvariantViolation : public std::logic_error {
 public:
  InvariantViolation(std::string check, std::string witness)
      : std::logic_error(check + ": " + witness), check_(std::move(check)), witness_(std::move(witness)) {}

  const std::string& check() const noexcept { return check_; }
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string check_;
  std::string witness_;
};

}  // namespace sqtsp
