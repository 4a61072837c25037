#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace potsym {

enum class ErrorKind {
  DivisionByZero,
  NumericSingularity,
  SyntaxError,
  UnknownSymbol,
  BadDerivativeSuffix,
  DuplicateName,
  ForwardReference,
  BadRule,
  BadConstraint,
  IncompatibleSystem,
  NonTerminating,
  NotAConservationLaw,
  NotLinearInSlack,
  IncompatiblePotential,
  NotEliminable,
  SingularJacobian,
  MapMismatch,
  BadInverse,
  NotASymmetry,
  ZeroAlpha,
  NameCollision,
  UnknownCase,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

struct SourceLocation {
  int line = 0;
  int column = 0;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<SourceLocation> where = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<SourceLocation>& location() const noexcept { return where_; }
  // "Kind at L:C: message"
  std::string describe() const;

 private:
  ErrorKind kind_;
  std::optional<SourceLocation> where_;
};

}  // namespace potsym
