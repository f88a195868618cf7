#pragma once

#include <stdexcept>
#include <string>

namespace linkwatch {

// Failure categories. The CLI maps these onto its exit codes.
enum class ErrorKind {
  kInvalidArgument,
  kInputMissing,
  kSchemaViolation,
  kInvariantViolation,
  kSchemaMismatch,
  kProviderFailure,
  kIo,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace linkwatch
