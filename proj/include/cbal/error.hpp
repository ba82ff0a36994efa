#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cbal {

enum class ErrorKind {
  EmptyOrSingleton,
  NonpositiveBudget,
  NonfiniteBudget,
  InvalidEndowment,
  KOutOfRange,
  WeightsNotMonotone,
  WeightsNotNormalized,
  AmountsMismatch,
  OutOfRange,
  MOutOfRange,
  PremiseViolated,
  BadGrid,
  SingleCrossingViolation,
  InternalConsistency,
  InvalidArgument,
  Parse,
};

std::string_view to_string(ErrorKind kind);

// Every recoverable failure in the library is reported as an Error carrying
// a kind that callers (and tests) can branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cbal
