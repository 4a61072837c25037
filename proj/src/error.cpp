#include "potsym/error.hpp"

namespace potsym {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NumericSingularity: return "NumericSingularity";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::BadDerivativeSuffix: return "BadDerivativeSuffix";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::ForwardReference: return "ForwardReference";
    case ErrorKind::BadRule: return "BadRule";
    case ErrorKind::BadConstraint: return "BadConstraint";
    case ErrorKind::IncompatibleSystem: return "IncompatibleSystem";
    case ErrorKind::NonTerminating: return "NonTerminating";
    case ErrorKind::NotAConservationLaw: return "NotAConservationLaw";
    case ErrorKind::NotLinearInSlack: return "NotLinearInSlack";
    case ErrorKind::IncompatiblePotential: return "IncompatiblePotential";
    case ErrorKind::NotEliminable: return "NotEliminable";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::MapMismatch: return "MapMismatch";
    case ErrorKind::BadInverse: return "BadInverse";
    case ErrorKind::NotASymmetry: return "NotASymmetry";
    case ErrorKind::ZeroAlpha: return "ZeroAlpha";
    case ErrorKind::NameCollision: return "NameCollision";
    case ErrorKind::UnknownCase: return "UnknownCase";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<SourceLocation> where)
    : std::runtime_error(message), kind_(kind), where_(where) {}

std::string Error::describe() const {
  std::string s(to_string(kind_));
  if (where_) s += " at " + std::to_string(where_->line) + ":" + std::to_string(where_->column);
  s += ": ";
  s += what();
  return s;
}

}  // namespace potsym
