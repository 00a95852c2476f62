#pragma once

#include <stdexcept>
#include <string>

namespace tnum {

/// Failure categories. The CLI maps each one to a distinct exit status.
enum class ErrorKind {
  Validation,    // malformed input, dimension mismatch, unknown key
  Precondition,  // mathematically invalid request (class not preserved, e != 0, ...)
  NotConverged,
  Internal,
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

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

class NotConvergedError : public Error {
 public:
  explicit NotConvergedError(const std::string& what) : Error(ErrorKind::NotConverged, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorKind::Internal, what) {}
};

void require_same_dim(std::size_t expected, std::size_t got, const char* what);

}  // namespace tnum
