#pragma once

// Uncanonicalized expression trees, as produced by the parser or by test
// generators, and their conversion to canonical Exprs.

#include <functional>
#include <memory>
#include <vector>

#include "potsym/expr.hpp"

namespace potsym {

struct RawExpr;
using RawPtr = std::shared_ptr<const RawExpr>;

struct RawExpr {
  enum class Op { Number, Symbol, Leaf, Neg, Add, Sub, Mul, Div, Pow, Exp, Log, Deriv };

  Op op = Op::Number;
  Rational value;                // Number
  std::string name;              // Symbol
  Expr leaf;                     // Leaf: an already canonical expression
  int power = 0;                 // Pow
  std::vector<Direction> dirs;   // Deriv: D[arg, dirs...]
  std::vector<RawPtr> args;
  SourceLocation where;

  static RawPtr number(Rational v, SourceLocation at = {});
  static RawPtr symbol(std::string name, SourceLocation at = {});
  static RawPtr of(Expr e);
  static RawPtr unary(Op op, RawPtr a, SourceLocation at = {});
  static RawPtr binary(Op op, RawPtr a, RawPtr b, SourceLocation at = {});
  static RawPtr raise(RawPtr base, int power, SourceLocation at = {});
  static RawPtr derivative(RawPtr arg, std::vector<Direction> dirs, SourceLocation at = {});
};

// Resolves Symbol nodes to canonical expressions.
using SymbolResolver = std::function<Expr(const RawExpr&)>;
// Total derivative used for Deriv nodes.
using TotalDerivative = std::function<Expr(const Expr&, Direction)>;

// Throws DivisionByZero (with the node's location) when a divisor
// canonicalizes to zero.
Expr canonicalize(Context& ctx, const RawExpr& e, const SymbolResolver& resolve,
                  const TotalDerivative& total = {});

// Direct floating-point evaluation of the tree, without canonicalization.
double evaluate_raw(const RawExpr& e, const std::function<double(const RawExpr&)>& leaf_value);

}  // namespace potsym
