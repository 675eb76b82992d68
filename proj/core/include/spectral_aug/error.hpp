#pragma once

#include <stdexcept>
#include <string>

namespace spectral_aug {

/// Error categories double as CLI exit codes.
enum class ErrorCategory : int {
  validation = 1,
  capability = 2,
  internal = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Input violates a documented precondition (bad index, shape mismatch, ...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

/// Malformed document (JSON, config).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

/// Request is well-formed but exceeds what an exhaustive routine supports.
class CapabilityError : public Error {
 public:
  explicit CapabilityError(const std::string& what)
      : Error(ErrorCategory::capability, what) {}
};

/// Every Lipschitz probe was degenerate.
class EstimationError : public Error {
 public:
  explicit EstimationError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what)
      : Error(ErrorCategory::internal, what) {}
};

}  // namespace spectral_aug
