#pragma once

#include <stdexcept>
#include <string>

namespace fuchsian {

enum class ErrorKind {
  validation,  // malformed or out-of-domain input
  numerical,   // a computation that should succeed did not
};

/// Error with a stable machine-readable code, e.g. "duplicate_point".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

inline Error validation_error(std::string code, const std::string& message) {
  return Error(ErrorKind::validation, std::move(code), message);
}

inline Error numerical_error(std::string code, const std::string& message) {
  return Error(ErrorKind::numerical, std::move(code), message);
}

}  // namespace fuchsian
