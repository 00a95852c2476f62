#include "tnum/errors.hpp"

namespace tnum {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::NotConverged: return "not-converged";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

void require_same_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw ValidationError(std::string("dimension mismatch in ") + what + ": expected " +
                          std::to_string(expected) + ", got " + std::to_string(got));
  }
}

}  // namespace tnum
