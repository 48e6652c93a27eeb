#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace anisoforge {

enum class ErrorKind {
  Inconsistent,
  SearchBudgetExceeded,
  NoDecomposition,
  DisjointnessViolated,
  PreconditionFailed,
  PrecisionExhausted,
  PlanViolation,
  NotPrimitive,
  ShapeMismatch,
  BudgetExceeded,
  CertificationFailed,
  AuditFailed,
  ContextMismatch,
  InvalidArgument,
  ParseError,
  InternalError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Process exit codes shared by the CLI: 0 valid, 2 a check failed, 3 a budget ran out.
int exit_code_for(ErrorKind kind);

}  // namespace anisoforge
