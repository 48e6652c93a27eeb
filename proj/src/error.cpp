#include "anisoforge/error.hpp"

namespace anisoforge {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorKind::NoDecomposition: return "NoDecomposition";
    case ErrorKind::DisjointnessViolated: return "DisjointnessViolated";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::PlanViolation: return "PlanViolation";
    case ErrorKind::NotPrimitive: return "NotPrimitive";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::CertificationFailed: return "CertificationFailed";
    case ErrorKind::AuditFailed: return "AuditFailed";
    case ErrorKind::ContextMismatch: return "ContextMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InternalError: return "InternalError";
  }
  return "Unknown";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SearchBudgetExceeded:
    case ErrorKind::BudgetExceeded:
      return 3;
    case ErrorKind::InvalidArgument:
    case ErrorKind::ParseError:
      return 1;
    case ErrorKind::InternalError:
      return 4;
    default:
      return 2;
  }
}

}  // namespace anisoforge
