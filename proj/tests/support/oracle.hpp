#pragma once

// Numeric sampling on exact solutions.

#include <algorithm>
#include <cmath>
#include <map>

#include "potsym/jet.hpp"

namespace potsym::testing {

// Exact solutions written as expressions in t and x; jets are their partial
// derivatives.
struct Solution {
  std::map<int, Expr> dependents;
  std::map<int, Expr> params;
};

inline Expr derivative_of(const Expr& f, DerivIndex k) {
  Expr out = f;
  for (int i = 0; i < k.kt; ++i) out = partial_derivative(out, Atom::independent(Direction::T));
  for (int i = 0; i < k.kx; ++i) out = partial_derivative(out, Atom::independent(Direction::X));
  return out;
}

// Numeric values at (t, x) of every atom of e on the solution; jets of
// dependents the solution omits are filled from free_jets.
inline std::map<Atom, double> point_on(const Solution& s, const Expr& e, double t, double x,
                                std::map<Atom, double> free_jets = {}) {
  std::map<Atom, double> base{{Atom::independent(Direction::T), t}, {Atom::independent(Direction::X), x}};
  std::map<Atom, double> p = base;
  for (Atom a : atoms_of(e)) {
    const std::map<int, Expr>* table = a.kind() == AtomKind::Jet ? &s.dependents
                                       : a.kind() == AtomKind::Param ? &s.params
                                                                     : nullptr;
    if (!table) continue;
    auto it = table->find(a.owner());
    if (it != table->end()) p[a] = evaluate_numeric(derivative_of(it->second, a.index()), base);
    else if (free_jets.count(a)) p[a] = free_jets[a];
  }
  return p;
}

inline double scale_of(const Expr& e, const std::map<Atom, double>& p) {
  double s = 1;
  for (const Term& term : e.num()) {
    Expr mono = e.context().from_poly({term});
    s = std::max(s, std::fabs(evaluate_numeric(mono, p)));
  }
  return s;
}

}  // namespace potsym::testing
