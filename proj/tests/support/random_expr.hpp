#pragma once

// Random expression trees for the property suites.

#include <random>
#include <vector>

#include "potsym/raw.hpp"

namespace potsym::testing {

class RandomExprGen {
 public:
  RandomExprGen(Context& ctx, std::vector<Expr> leaves, std::uint64_t seed)
      : ctx_(ctx), leaves_(std::move(leaves)), rng_(seed) {}

  // Polynomial-only trees when allow_division and allow_kernels are false.
  RawPtr tree(int depth, bool allow_division = true, bool allow_kernels = true) {
    std::uniform_int_distribution<int> pick(0, 9);
    if (depth <= 0 || pick(rng_) < 2) return leaf();
    int op = pick(rng_);
    auto a = tree(depth - 1, allow_division, allow_kernels);
    switch (op) {
      case 0:
      case 1:
      case 2: return RawExpr::binary(RawExpr::Op::Add, a, tree(depth - 1, allow_division, allow_kernels));
      case 3: return RawExpr::binary(RawExpr::Op::Sub, a, tree(depth - 1, allow_division, allow_kernels));
      case 4:
      case 5: return RawExpr::binary(RawExpr::Op::Mul, a, tree(depth - 1, allow_division, allow_kernels));
      case 6:
        if (allow_division) return RawExpr::binary(RawExpr::Op::Div, a, nonzero_denominator());
        return RawExpr::raise(a, 2);
      case 7: return RawExpr::raise(a, 2);
      case 8:
        if (allow_kernels) return RawExpr::unary(RawExpr::Op::Exp, linear());
        return RawExpr::unary(RawExpr::Op::Neg, a);
      default: return RawExpr::unary(RawExpr::Op::Neg, a);
    }
  }

  RawPtr leaf() {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(leaves_.size()) + 1);
    int i = pick(rng_);
    if (i >= static_cast<int>(leaves_.size())) {
      std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
      return RawExpr::number(Rational(num(rng_), den(rng_)));
    }
    return RawExpr::of(leaves_[static_cast<std::size_t>(i)]);
  }

  // Denominators bounded away from zero at sample points in [0.5, 1.5]:
  // a leaf plus a positive constant, or a square plus one.
  RawPtr nonzero_denominator() {
    std::uniform_int_distribution<int> pick(0, 1), c(2, 4);
    auto l = RawExpr::of(leaves_[std::uniform_int_distribution<std::size_t>(0, leaves_.size() - 1)(rng_)]);
    if (pick(rng_) == 0) return RawExpr::binary(RawExpr::Op::Add, l, RawExpr::number(c(rng_)));
    return RawExpr::binary(RawExpr::Op::Add, RawExpr::raise(l, 2), RawExpr::number(1));
  }

  // Small linear combination of leaves, used for exp arguments.
  RawPtr linear() {
    std::uniform_int_distribution<int> coef(-2, 2);
    auto a = RawExpr::binary(RawExpr::Op::Mul, RawExpr::number(coef(rng_)), leaf());
    return RawExpr::binary(RawExpr::Op::Add, a, RawExpr::number(coef(rng_)));
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  Context& ctx_;
  std::vector<Expr> leaves_;
  std::mt19937_64 rng_;
};

}  // namespace potsym::testing
