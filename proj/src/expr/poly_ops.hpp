#pragma once

#include "potsym/expr.hpp"

namespace potsym::detail {

Poly add(const Poly& a, const Poly& b);
Poly neg(const Poly& a);
Poly scale(const Poly& a, const Rational& c);
Poly mul(Context& ctx, const Poly& a, const Poly& b);
Monomial mono_mul(Context& ctx, const Monomial& a, const Monomial& b);
Poly times_monomial(Context& ctx, const Poly& a, const Monomial& m, const Rational& c);
Poly constant(const Rational& c);
bool is_one(const Poly& p);
bool is_constant(const Poly& p);
std::size_t hash(const Poly& p);

// Sorts terms descending and merges equal monomials, dropping zeros.
void canonical_order(Poly& p);

// Divides num and den by their polynomial GCD.  Returns false when the GCD is
// a constant.  Defined in gcd.cpp.
bool cancel_common_factor(Context& ctx, Poly& num, Poly& den);

}  // namespace potsym::detail
