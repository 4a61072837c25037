#pragma once

// Total derivatives, solved-form systems and their reduction, and point
// vector fields with their prolongations.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "potsym/expr.hpp"

namespace potsym {

Expr total_derivative(const Expr& e, Direction d);
Expr total_derivative(const Expr& e, DerivIndex k);

// Derivative in t or x that holds jet coordinates fixed but follows parameter
// functions, which depend on (t, x).
Expr explicit_derivative(const Expr& e, Direction d);

struct ParamFunction {
  std::string name;
  int id = -1;
  // Constraint lead -> rhs, e.g. alpha_t -> x*alpha_x - alpha_xx.
  std::optional<DerivIndex> lead;
  Expr rhs;

  std::optional<Atom> lead_atom() const {
    return lead ? std::optional<Atom>(Atom::param(id, *lead)) : std::nullopt;
  }
};

// Every parameter function known to a session, by id.
using ParamTable = std::map<int, ParamFunction>;

// Parameter functions referenced by the expressions, looked up in the table.
std::vector<ParamFunction> params_in(const std::vector<Expr>& exprs, const ParamTable& table);

// Checks a constraint: lead has kt >= 1 and rhs involves only t, x and the
// function's own derivatives of lower t-order.  Throws BadConstraint.
void validate_constraint(const ParamFunction& p);

struct Rule {
  Atom lead;
  Expr rhs;
  // Consequence rules only: the exact difference lead - rhs written in the
  // slack symbols of the counted equations.
  Expr slack;
  bool consequence = false;
};

class PDESystem {
 public:
  PDESystem() = default;

  // Validates rules and constraints, then checks pairwise cross-derivative
  // compatibility.  A mismatch that is linear in a coordinate of a dependent
  // without rules is recorded as a consequence rule; any other mismatch
  // throws IncompatibleSystem.
  static PDESystem create(Context& ctx, std::string name, std::vector<int> dependents,
                          std::vector<Rule> equations, std::vector<ParamFunction> params = {});

  Context& context() const { return *ctx_; }
  const std::string& name() const { return name_; }
  const std::vector<int>& dependents() const { return dependents_; }
  const std::vector<Rule>& equations() const { return equations_; }
  const std::vector<Rule>& consequences() const { return consequences_; }
  const std::vector<ParamFunction>& params() const { return params_; }
  const ParamFunction* param(int id) const;
  bool has_dependent(int id) const;

  // Equation i as the expression lead - rhs.
  Expr operator_expr(std::size_t i) const;
  // Formal slack standing for equation i: total derivatives of the slack shift
  // its index, S_{i,K} = D^K(lead_i - rhs_i).
  int slack_symbol(std::size_t i) const { return slack_ids_.at(i); }
  std::optional<std::size_t> slack_equation(Atom a) const;

  // Same rules with additional parameter functions attached.
  PDESystem with_params(const std::vector<ParamFunction>& extra) const;

  // Normal form on solutions.  Throws NonTerminating.
  Expr reduce(const Expr& e) const;
  // Exact rewrite leaving every use of a rule visible as a slack atom.
  Expr reduce_with_slacks(const Expr& e) const;

  // Highest-ranked applicable rule for a jet coordinate or parameter
  // derivative, if any.
  const Rule* rule_for(Atom a) const;

 private:
  class Reducer;
  void complete();
  Reducer& reducer(bool slack) const;

  Context* ctx_ = nullptr;
  std::string name_;
  std::vector<int> dependents_;
  std::vector<Rule> equations_, consequences_;
  std::vector<Rule> constraints_;
  std::vector<ParamFunction> params_;
  std::vector<int> slack_ids_;
  // Reducers refer back to their system, so copies start with fresh caches.
  struct Cache {
    std::shared_ptr<Reducer> plain, slacked;
    Cache() = default;
    Cache(const Cache&) {}
    Cache& operator=(const Cache&) {
      plain.reset();
      slacked.reset();
      return *this;
    }
  };
  mutable Cache cache_;
};

inline constexpr int kReductionStepBound = 10000;

// Infinitesimal point generator tau d_t + xi d_x + sum eta^a d_{u^a}.
struct VectorField {
  Expr tau, xi;
  std::map<int, Expr> eta;  // by dependent id; absent means 0

  static VectorField zero(Context& ctx);
  Context& context() const { return tau.context(); }
  Expr eta_of(int dependent) const;

  VectorField operator+(const VectorField& o) const;
  VectorField operator-(const VectorField& o) const;
  VectorField operator*(const Expr& c) const;
  bool is_zero() const;
  bool equals(const VectorField& o) const;
  std::string str() const;
};

// Throws InvalidArgument when a coefficient involves derivatives of a
// dependent (only point generators are supported).
void validate_point_field(const VectorField& q);

// Coefficients of the prolonged field over every jet coordinate of the given
// dependents up to the given order.
std::map<Atom, Expr> prolong_vector_field(const VectorField& q, const std::vector<int>& dependents, int order);

// pr Q applied to e, prolonged as far as e requires.
Expr apply_prolonged(const VectorField& q, const Expr& e);

}  // namespace potsym
