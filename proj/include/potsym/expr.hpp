#pragma once

// Canonical rational expressions over jet coordinates.
//
// An Expr is a quotient num/den of sparse polynomials with exact rational
// coefficients.  Polynomial atoms are the independent variables t and x,
// jet coordinates u_{kt,kx}, parameter-function derivatives, formal symbols
// and log kernels.  Exponentials are not atoms: every monomial carries at most
// one exp factor whose argument is itself a canonical Expr, so that
// exp(a)exp(b) = exp(a+b) holds structurally and exp factors act as units.
//
// Nodes are hash-consed inside a Context.  A Context and all Exprs built from
// it must stay on one thread.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "potsym/error.hpp"

namespace potsym {

using Rational = mpq_class;

enum class Direction { T, X };

struct DerivIndex {
  int kt = 0;
  int kx = 0;

  int order() const { return kt + kx; }
  DerivIndex shifted(Direction d, int n = 1) const {
    return d == Direction::T ? DerivIndex{kt + n, kx} : DerivIndex{kt, kx + n};
  }
  // componentwise >=
  bool covers(const DerivIndex& o) const { return kt >= o.kt && kx >= o.kx; }
  DerivIndex operator-(const DerivIndex& o) const { return {kt - o.kt, kx - o.kx}; }
  DerivIndex operator+(const DerivIndex& o) const { return {kt + o.kt, kx + o.kx}; }
  auto operator<=>(const DerivIndex&) const = default;
};

// Suffix form used by the DSL: {1,2} -> "txx".
std::string suffix(const DerivIndex& k);

enum class AtomKind : std::uint8_t { Independent = 0, Jet = 1, Param = 2, Formal = 3, Log = 4 };

// A polynomial atom.  The packed key doubles as the global atom order:
// independent < jet (dependent, kt, kx) < parameter derivative < formal < log
// kernels by creation order.
class Atom {
 public:
  Atom() = default;

  static Atom independent(Direction d);
  static Atom jet(int dependent, DerivIndex k);
  static Atom param(int function, DerivIndex k);
  static Atom formal(int symbol, DerivIndex k);
  static Atom log_kernel(std::uint32_t serial);

  AtomKind kind() const { return static_cast<AtomKind>(key_ >> 60); }
  int owner() const { return static_cast<int>((key_ >> 40) & 0xFFFFF); }
  DerivIndex index() const {
    return {static_cast<int>((key_ >> 30) & 0x3FF), static_cast<int>((key_ >> 20) & 0x3FF)};
  }
  bool differentiable() const {
    return kind() == AtomKind::Jet || kind() == AtomKind::Param || kind() == AtomKind::Formal;
  }
  // Same family (dependent, function or symbol) with a changed index.
  Atom with_index(DerivIndex k) const;
  Atom shifted(Direction d) const { return with_index(index().shifted(d)); }

  std::uint64_t key() const { return key_; }
  auto operator<=>(const Atom&) const = default;

 private:
  explicit Atom(std::uint64_t key) : key_(key) {}
  static Atom pack(AtomKind kind, int owner, DerivIndex k);
  std::uint64_t key_ = 0;
};

struct Node;
class Context;

struct Monomial {
  std::vector<std::pair<Atom, int>> powers;  // ascending atom order, positive exponents
  const Node* exp = nullptr;                 // argument of the exp factor, if any

  bool is_unit() const { return powers.empty(); }
  bool operator==(const Monomial& o) const { return powers == o.powers && exp == o.exp; }
};

// Three-way monomial comparison: lex on atoms (highest atom first), then the
// exp argument's creation serial.
int compare(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  Rational coef;
  bool operator==(const Term& o) const { return mono == o.mono && coef == o.coef; }
};

// Terms in strictly descending monomial order, all coefficients nonzero.
using Poly = std::vector<Term>;

struct Node {
  Poly num;
  Poly den;
  std::size_t hash = 0;
  std::uint64_t serial = 0;
  // 1 if some exp argument in num/den still holds an extractable log multiple
  mutable int pending_log = -1;
};

class Expr {
 public:
  Expr() = default;
  Expr(Context* ctx, const Node* node) : ctx_(ctx), node_(node) {}

  bool valid() const { return node_ != nullptr; }
  Context& context() const { return *ctx_; }
  const Node* node() const { return node_; }
  const Poly& num() const { return node_->num; }
  const Poly& den() const { return node_->den; }

  bool is_zero() const { return node_->num.empty(); }
  bool is_polynomial() const;  // denominator is 1
  std::optional<Rational> constant_value() const;
  bool is_constant() const { return constant_value().has_value(); }

  std::string str() const;

  // Nodes are canonical, so identical rational functions share a node in all
  // the cases the normal form covers.  equals() falls back to a zero test.
  bool operator==(const Expr& o) const { return node_ == o.node_; }
  bool equals(const Expr& o) const;

  Expr operator-() const;
  Expr pow(int n) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator+(const Expr& a, long b);
  friend Expr operator-(const Expr& a, long b);
  friend Expr operator*(const Expr& a, long b);
  friend Expr operator*(long a, const Expr& b) { return b * a; }
  friend Expr operator/(const Expr& a, long b);
  friend Expr operator*(const Expr& a, const Rational& b);

  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

 private:
  Context* ctx_ = nullptr;
  const Node* node_ = nullptr;
};

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return a.node()->serial < b.node()->serial; }
};

class Context {
 public:
  Context();
  ~Context();
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;

  Expr zero() { return zero_; }
  Expr one() { return one_; }
  Expr integer(long v) { return rational(Rational(v)); }
  Expr rational(const Rational& v);
  Expr atom(Atom a);
  Expr t() { return atom(Atom::independent(Direction::T)); }
  Expr x() { return atom(Atom::independent(Direction::X)); }
  Expr jet(int dependent, DerivIndex k = {}) { return atom(Atom::jet(dependent, k)); }
  Expr param(int function, DerivIndex k = {}) { return atom(Atom::param(function, k)); }
  Expr formal(int symbol, DerivIndex k = {}) { return atom(Atom::formal(symbol, k)); }
  Expr exp(const Expr& arg);
  Expr log(const Expr& arg);

  // Name registries.  Ids are assigned in first-use order.
  int dependent(std::string_view name);
  int param_function(std::string_view name);
  int formal_symbol(std::string_view name);
  std::optional<int> find_dependent(std::string_view name) const;
  std::optional<int> find_param_function(std::string_view name) const;
  std::optional<int> find_formal_symbol(std::string_view name) const;
  const std::string& dependent_name(int id) const { return dependents_.at(id); }
  const std::string& param_name(int id) const { return params_.at(id); }
  const std::string& formal_name(int id) const { return formals_.at(id); }

  // Argument of a log kernel atom.
  Expr log_argument(Atom a) const;
  std::string atom_name(Atom a) const;

  // Builds the canonical quotient num/den.  Throws DivisionByZero.
  Expr make(Poly num, Poly den);
  Expr from_poly(Poly p) { return make(std::move(p), unit_poly()); }
  Expr wrap(const Node* n) { return Expr(this, n); }

  // Number of interned nodes; used by tests to observe sharing.
  std::size_t node_count() const;

  static Poly unit_poly();

 private:
  friend class Expr;
  const Node* intern(Poly num, Poly den);
  Expr normalize(Poly num, Poly den);
  Expr extract_logs(const Expr& e);
  bool has_pending_log(const Node* n);

  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::vector<std::string> dependents_, params_, formals_;
  Expr zero_, one_;
};

// Formal partial derivative treating every other atom as a constant; the chain
// rule runs through exp factors and log kernels.
Expr partial_derivative(const Expr& e, Atom a);

// General derivation: atom_derivative supplies the image of each
// non-kernel atom; exp factors and log kernels follow the chain rule.
Expr derive(const Expr& e, const std::function<Expr(Atom)>& atom_derivative);

using AtomMap = std::map<Atom, Expr>;

// Simultaneous substitution, recursing into kernel arguments.
Expr substitute(const Expr& e, const AtomMap& bindings);

// Atoms occurring in e; with deep=true also those inside kernel arguments
// (the log atoms themselves are always included).
std::set<Atom> atoms_of(const Expr& e, bool deep = true);
bool depends_on(const Expr& e, Atom a);

// Highest DerivIndex total over jet coordinates (recursively).
int jet_order(const Expr& e);

// Throws NumericSingularity when a denominator is below 1e-12 in magnitude or
// a log argument is not positive.
double evaluate_numeric(const Expr& e, const std::map<Atom, double>& point);

// Exact polynomial GCD over Q for the kernel's multivariate polynomials.  Exp
// factors are treated as opaque variables.  Exposed for testing.
Poly poly_gcd(Context& ctx, const Poly& a, const Poly& b);

}  // namespace potsym
