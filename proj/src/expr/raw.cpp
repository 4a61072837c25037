#include <cmath>

#include "potsym/raw.hpp"

namespace potsym {

RawPtr RawExpr::number(Rational v, SourceLocation at) {
  auto r = std::make_shared<RawExpr>();
  r->op = Op::Number;
  r->value = std::move(v);
  r->value.canonicalize();
  r->where = at;
  return r;
}

RawPtr RawExpr::symbol(std::string name, SourceLocation at) {
  auto r = std::make_shared<RawExpr>();
  r->op = Op::Symbol;
  r->name = std::move(name);
  r->where = at;
  return r;
}

RawPtr RawExpr::of(Expr e) {
  auto r = std::make_shared<RawExpr>();
  r->op = Op::Leaf;
  r->leaf = e;
  return r;
}

RawPtr RawExpr::unary(Op op, RawPtr a, SourceLocation at) {
  auto r = std::make_shared<RawExpr>();
  r->op = op;
  r->args = {std::move(a)};
  r->where = at;
  return r;
}

RawPtr RawExpr::binary(Op op, RawPtr a, RawPtr b, SourceLocation at) {
  auto r = std::make_shared<RawExpr>();
  r->op = op;
  r->args = {std::move(a), std::move(b)};
  r->where = at;
  return r;
}

RawPtr RawExpr::raise(RawPtr base, int power, SourceLocation at) {
  auto r = std::make_shared<RawExpr>();
  r->op = Op::Pow;
  r->power = power;
  r->args = {std::move(base)};
  r->where = at;
  return r;
}

RawPtr RawExpr::derivative(RawPtr arg, std::vector<Direction> dirs, SourceLocation at) {
  auto r = std::make_shared<RawExpr>();
  r->op = Op::Deriv;
  r->dirs = std::move(dirs);
  r->args = {std::move(arg)};
  r->where = at;
  return r;
}

Expr canonicalize(Context& ctx, const RawExpr& e, const SymbolResolver& resolve, const TotalDerivative& total) {
  auto sub = [&](std::size_t i) { return canonicalize(ctx, *e.args[i], resolve, total); };
  switch (e.op) {
    case RawExpr::Op::Number: return ctx.rational(e.value);
    case RawExpr::Op::Symbol: return resolve(e);
    case RawExpr::Op::Leaf: return e.leaf;
    case RawExpr::Op::Neg: return -sub(0);
    case RawExpr::Op::Add: return sub(0) + sub(1);
    case RawExpr::Op::Sub: return sub(0) - sub(1);
    case RawExpr::Op::Mul: return sub(0) * sub(1);
    case RawExpr::Op::Div: {
      Expr d = sub(1);
      if (d.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by an expression that is zero", e.where);
      return sub(0) / d;
    }
    case RawExpr::Op::Pow: {
      Expr b = sub(0);
      if (e.power < 0 && b.is_zero())
        throw Error(ErrorKind::DivisionByZero, "negative power of zero", e.where);
      return b.pow(e.power);
    }
    case RawExpr::Op::Exp: return ctx.exp(sub(0));
    case RawExpr::Op::Log: {
      Expr a = sub(0);
      if (a.is_zero()) throw Error(ErrorKind::DivisionByZero, "log of zero", e.where);
      return ctx.log(a);
    }
    case RawExpr::Op::Deriv: {
      if (!total) throw Error(ErrorKind::InvalidArgument, "derivative operator not available here", e.where);
      Expr a = sub(0);
      for (Direction d : e.dirs) a = total(a, d);
      return a;
    }
  }
  return ctx.zero();
}

double evaluate_raw(const RawExpr& e, const std::function<double(const RawExpr&)>& leaf_value) {
  auto sub = [&](std::size_t i) { return evaluate_raw(*e.args[i], leaf_value); };
  switch (e.op) {
    case RawExpr::Op::Number: return e.value.get_d();
    case RawExpr::Op::Symbol:
    case RawExpr::Op::Leaf: return leaf_value(e);
    case RawExpr::Op::Neg: return -sub(0);
    case RawExpr::Op::Add: return sub(0) + sub(1);
    case RawExpr::Op::Sub: return sub(0) - sub(1);
    case RawExpr::Op::Mul: return sub(0) * sub(1);
    case RawExpr::Op::Div: return sub(0) / sub(1);
    case RawExpr::Op::Pow: return std::pow(sub(0), e.power);
    case RawExpr::Op::Exp: return std::exp(sub(0));
    case RawExpr::Op::Log: return std::log(sub(0));
    case RawExpr::Op::Deriv: throw Error(ErrorKind::InvalidArgument, "cannot evaluate a derivative node");
  }
  return 0.0;
}

}  // namespace potsym
