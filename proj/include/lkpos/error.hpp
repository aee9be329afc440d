#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lkpos {

enum class ErrorKind {
  DivergentIntegral,
  InvalidMeasure,
  DomainError,
  NonFiniteEntry,
  NotReflectionPositive,
  IndexError,
  OrderTooHigh,
  NotNegativeDefinite,
  NotIncreasing,
  InvalidRep,
  NotConvex,
  NotSymmetric,
  UnknownName,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// CLI and the Python module can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lkpos
