#pragma once

#include <string>
#include <vector>

#include "potsym/jet.hpp"

namespace potsym {

struct ConservedVector {
  Expr T, X;
  int order = 0;

  static ConservedVector make(Expr T, Expr X);
  ConservedVector operator-(const ConservedVector& o) const { return make(T - o.T, X - o.X); }
  ConservedVector operator+(const ConservedVector& o) const { return make(T + o.T, X + o.X); }
  ConservedVector operator*(const Expr& c) const { return make(T * c, X * c); }
};

// One component per counted equation of the system.
struct Characteristic {
  std::vector<Expr> components;

  bool equals(const Characteristic& o) const;
  std::string str() const;
};

struct Verdict {
  bool holds = false;
  std::vector<Expr> residuals;
};

// Throws UnknownSymbol when cv involves a dependent outside sys.
Verdict verify_conservation_law(const ConservedVector& cv, const PDESystem& sys);

// Throws NotAConservationLaw or NotLinearInSlack.
Characteristic extract_characteristic(const ConservedVector& cv, const PDESystem& sys);

bool is_trivial(const ConservedVector& cv, const PDESystem& sys);
bool are_equivalent(const ConservedVector& a, const ConservedVector& b, const PDESystem& sys);

// v_x = T, v_t = -X.  A single evolution equation is dropped and comes back as
// a consequence of the potential rules.  Throws NameCollision,
// IncompatiblePotential.
PDESystem build_potential_system(const ConservedVector& cv, const PDESystem& sys, const std::string& potential,
                                 const std::string& name);

// Eliminates the non-potential dependent from a two-dependent potential
// system.  Throws NotEliminable.
PDESystem potential_equation(const PDESystem& potsys, const std::string& name);

}  // namespace potsym
