#include "hsq/error.hpp"

namespace hsq {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid parameter";
    case ErrorKind::AlreadySolved: return "already solved";
    case ErrorKind::EmptyMarkedSet: return "empty marked set";
    case ErrorKind::BudgetExceeded: return "budget exceeded";
    case ErrorKind::PathDisconnected: return "path disconnected";
    case ErrorKind::NumericalFailure: return "numerical failure";
    case ErrorKind::BasisMismatch: return "basis mismatch";
    case ErrorKind::StepFailure: return "step failure";
    case ErrorKind::NonCoprimeBase: return "non-coprime base";
  }
  return "unknown";
}

}  // namespace hsq
