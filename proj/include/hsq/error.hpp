#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hsq {

enum class ErrorKind {
  InvalidParameter,
  AlreadySolved,
  EmptyMarkedSet,
  BudgetExceeded,
  PathDisconnected,
  NumericalFailure,
  BasisMismatch,
  StepFailure,
  NonCoprimeBase,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Thrown when the factoring base shares a factor with the modulus; the gcd is
// already a non-trivial factor.
class NonCoprimeBase : public Error {
 public:
  NonCoprimeBase(std::uint64_t factor, const std::string& what)
      : Error(ErrorKind::NonCoprimeBase, what), factor_(factor) {}

  std::uint64_t factor() const noexcept { return factor_; }

 private:
  std::uint64_t factor_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::InvalidParameter, what);
}

}  // namespace hsq
