#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "potsym/conslaw.hpp"

namespace potsym {

// Infinitesimal criterion: pr Q (lead - rhs) reduces to 0 for every equation.
Verdict verify_lie_symmetry(const VectorField& q, const PDESystem& sys);

// (Q(T) + T D_x xi - X D_x tau, Q(X) + X D_t tau - T D_t xi), reduced.  Throws
// NotASymmetry.
ConservedVector symmetry_action_on_cv(const VectorField& q, const ConservedVector& cv, const PDESystem& sys);
bool is_invariant_cl(const VectorField& q, const ConservedVector& cv, const PDESystem& sys);

// Q applied to a point function: tau, xi act as explicit derivatives.
Expr apply_point(const VectorField& q, const Expr& f);
VectorField commutator(const VectorField& a, const VectorField& b);

// Coordinates of q in the rational span of basis, if it lies there.
std::optional<std::vector<Rational>> span_coordinates(const VectorField& q, const std::vector<VectorField>& basis);
bool linearly_independent(const std::vector<VectorField>& basis);

struct Closure {
  bool closed = false;
  // constants[i][j][k]: [B_i, B_j] = sum_k c B_k, for i < j
  std::vector<std::vector<std::vector<Rational>>> constants;
  std::optional<std::pair<std::size_t, std::size_t>> offending;
};
Closure verify_span_closure(const std::vector<VectorField>& basis);

// Extends a generator on (t, x, v) by eta d_u with
//   eta = (theta_v - xi_x - (alpha_t/alpha) tau - (alpha_x/alpha) xi) u + theta_x/alpha.
// Throws ZeroAlpha.
VectorField prolong_potential_symmetry(const VectorField& qhat, const Expr& alpha, int u, int v);

// True iff the coefficient of some non-potential d_u depends on a potential.
bool is_pure_potential(const VectorField& q, const std::vector<int>& potentials);

// The identities tau_u, xi_u, theta_u, tau_x, tau_v, xi_v, theta_vv and
// eta_v - theta_xv/alpha that every symmetry of v_x = alpha u, v_t = alpha u_x - alpha_x u
// satisfies.  With literal set the last one is eta_v - theta_xv, which only
// follows from the eta formula when alpha is constant.
std::vector<std::pair<std::string, Expr>> determining_identities(const VectorField& q, const Expr& alpha, int u, int v,
                                                                  bool literal = false);

}  // namespace potsym
