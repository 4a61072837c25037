#include "potsym/symmetry.hpp"

#include <algorithm>
#include <set>

namespace potsym {

namespace {

void check_dependents(const VectorField& q, const PDESystem& sys) {
  for (const auto& [d, e] : q.eta)
    if (!sys.has_dependent(d) && !e.is_zero())
      throw Error(ErrorKind::UnknownSymbol, sys.context().dependent_name(d) + " is not a dependent variable of " + sys.name());
}

}  // namespace

Verdict verify_lie_symmetry(const VectorField& q, const PDESystem& sys) {
  check_dependents(q, sys);
  Verdict v{true, {}};
  for (std::size_t i = 0; i < sys.equations().size(); ++i) {
    Expr r = sys.reduce(apply_prolonged(q, sys.operator_expr(i)));
    v.holds = v.holds && r.is_zero();
    v.residuals.push_back(r);
  }
  return v;
}

ConservedVector symmetry_action_on_cv(const VectorField& q, const ConservedVector& cv, const PDESystem& sys) {
  Verdict sym = verify_lie_symmetry(q, sys);
  if (!sym.holds) throw Error(ErrorKind::NotASymmetry, q.str() + " is not a symmetry of " + sys.name());
  Expr T = apply_prolonged(q, cv.T) + cv.T * total_derivative(q.xi, Direction::X) -
           cv.X * total_derivative(q.tau, Direction::X);
  Expr X = apply_prolonged(q, cv.X) + cv.X * total_derivative(q.tau, Direction::T) -
           cv.T * total_derivative(q.xi, Direction::T);
  return ConservedVector::make(sys.reduce(T), sys.reduce(X));
}

bool is_invariant_cl(const VectorField& q, const ConservedVector& cv, const PDESystem& sys) {
  ConservedVector out = symmetry_action_on_cv(q, cv, sys);
  return out.T.is_zero() && out.X.is_zero();
}

Expr apply_point(const VectorField& q, const Expr& f) {
  Expr r = q.tau * explicit_derivative(f, Direction::T) + q.xi * explicit_derivative(f, Direction::X);
  for (const auto& [d, e] : q.eta) r = r + e * partial_derivative(f, Atom::jet(d, {}));
  return r;
}

VectorField commutator(const VectorField& a, const VectorField& b) {
  auto bracket = [&](const Expr& ca, const Expr& cb) { return apply_point(a, cb) - apply_point(b, ca); };
  VectorField r{bracket(a.tau, b.tau), bracket(a.xi, b.xi), {}};
  std::set<int> deps;
  for (const auto& [d, e] : a.eta) deps.insert(d);
  for (const auto& [d, e] : b.eta) deps.insert(d);
  for (int d : deps)
    if (Expr c = bracket(a.eta_of(d), b.eta_of(d)); !c.is_zero()) r.eta[d] = c;
  return r;
}

namespace {

std::vector<int> union_dependents(const std::vector<const VectorField*>& fields) {
  std::set<int> deps;
  for (const auto* f : fields)
    for (const auto& [d, e] : f->eta) deps.insert(d);
  return {deps.begin(), deps.end()};
}

std::vector<Expr> components(const VectorField& q, const std::vector<int>& deps) {
  std::vector<Expr> out{q.tau, q.xi};
  for (int d : deps) out.push_back(q.eta_of(d));
  return out;
}

struct MonoKey {
  std::size_t position;
  Monomial mono;
};

struct MonoKeyLess {
  bool operator()(const MonoKey& a, const MonoKey& b) const {
    if (a.position != b.position) return a.position < b.position;
    return compare(a.mono, b.mono) < 0;
  }
};

// Rows: one per (component, monomial) after clearing denominators.  Columns:
// the fields; the last field is the right-hand side when rhs is set.
using Matrix = std::vector<std::vector<Rational>>;

Matrix coefficient_matrix(const std::vector<const VectorField*>& fields) {
  std::vector<int> deps = union_dependents(fields);
  std::vector<std::vector<Expr>> comps;
  for (const auto* f : fields) comps.push_back(components(*f, deps));
  std::map<MonoKey, std::vector<Rational>, MonoKeyLess> rows;
  std::size_t n = fields.size();
  for (std::size_t p = 0; p < deps.size() + 2; ++p) {
    Context& ctx = fields[0]->context();
    Expr common = ctx.one();
    std::vector<const Node*> seen;
    for (std::size_t k = 0; k < n; ++k) {
      Expr den = ctx.from_poly(comps[k][p].den());
      if (std::find(seen.begin(), seen.end(), den.node()) != seen.end()) continue;
      seen.push_back(den.node());
      common = common * den;
    }
    for (std::size_t k = 0; k < n; ++k) {
      Expr cleared = comps[k][p] * common;
      for (const Term& t : cleared.num()) {
        auto& row = rows.try_emplace(MonoKey{p, t.mono}, std::vector<Rational>(n, Rational(0))).first->second;
        row[k] = t.coef;
      }
      if (!cleared.is_polynomial()) {
        // not expected after clearing; keep the remaining quotient opaque
        auto& row = rows.try_emplace(MonoKey{p + 1000, Monomial{{}, cleared.node()}}, std::vector<Rational>(n, Rational(0)))
                        .first->second;
        row[k] += 1;
      }
    }
  }
  Matrix m;
  for (auto& [k, row] : rows) m.push_back(std::move(row));
  return m;
}

// Gaussian elimination; returns pivot columns.
std::vector<std::size_t> row_reduce(Matrix& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    Rational inv = 1 / m[r][c];
    for (auto& v : m[r]) v *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = 0; j < m[i].size(); ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::optional<std::vector<Rational>> span_coordinates(const VectorField& q, const std::vector<VectorField>& basis) {
  std::vector<const VectorField*> fields;
  for (const auto& b : basis) fields.push_back(&b);
  fields.push_back(&q);
  Matrix m = coefficient_matrix(fields);
  std::size_t n = basis.size();
  std::vector<std::size_t> piv = row_reduce(m, n + 1);
  if (!piv.empty() && piv.back() == n) return std::nullopt;
  std::vector<Rational> coords(n, Rational(0));
  for (std::size_t i = 0; i < piv.size(); ++i) coords[piv[i]] = m[i][n];
  return coords;
}

bool linearly_independent(const std::vector<VectorField>& basis) {
  if (basis.empty()) return true;
  std::vector<const VectorField*> fields;
  for (const auto& b : basis) fields.push_back(&b);
  Matrix m = coefficient_matrix(fields);
  return row_reduce(m, basis.size()).size() == basis.size();
}

Closure verify_span_closure(const std::vector<VectorField>& basis) {
  Closure c;
  std::size_t n = basis.size();
  c.constants.assign(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, Rational(0))));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto coords = span_coordinates(commutator(basis[i], basis[j]), basis);
      if (!coords) {
        c.offending = std::make_pair(i, j);
        return c;
      }
      c.constants[i][j] = *coords;
      for (std::size_t k = 0; k < n; ++k) c.constants[j][i][k] = -(*coords)[k];
    }
  c.closed = true;
  return c;
}

VectorField prolong_potential_symmetry(const VectorField& qhat, const Expr& alpha, int u, int v) {
  if (alpha.is_zero()) throw Error(ErrorKind::ZeroAlpha, "alpha must not vanish");
  Context& ctx = alpha.context();
  if (!qhat.eta_of(u).is_zero())
    throw Error(ErrorKind::InvalidArgument, "generator already has a coefficient for " + ctx.dependent_name(u));
  Expr theta = qhat.eta_of(v);
  Atom av = Atom::jet(v, {});
  Expr eta = (partial_derivative(theta, av) - explicit_derivative(qhat.xi, Direction::X) -
              explicit_derivative(alpha, Direction::T) / alpha * qhat.tau -
              explicit_derivative(alpha, Direction::X) / alpha * qhat.xi) *
                 ctx.jet(u) +
             explicit_derivative(theta, Direction::X) / alpha;
  VectorField q = qhat;
  if (!eta.is_zero()) q.eta[u] = eta;
  return q;
}

bool is_pure_potential(const VectorField& q, const std::vector<int>& potentials) {
  for (const auto& [d, e] : q.eta) {
    if (std::find(potentials.begin(), potentials.end(), d) != potentials.end()) continue;
    for (int v : potentials)
      if (!partial_derivative(e, Atom::jet(v, {})).is_zero()) return true;
  }
  return false;
}

std::vector<std::pair<std::string, Expr>> determining_identities(const VectorField& q, const Expr& alpha, int u, int v,
                                                                  bool literal) {
  Atom au = Atom::jet(u, {}), av = Atom::jet(v, {});
  Expr theta = q.eta_of(v), eta = q.eta_of(u);
  auto dx = [](const Expr& e) { return explicit_derivative(e, Direction::X); };
  Expr theta_xv = partial_derivative(dx(theta), av);
  return {
      {"tau_u", partial_derivative(q.tau, au)},
      {"xi_u", partial_derivative(q.xi, au)},
      {"theta_u", partial_derivative(theta, au)},
      {"tau_x", dx(q.tau)},
      {"tau_v", partial_derivative(q.tau, av)},
      {"xi_v", partial_derivative(q.xi, av)},
      {"theta_vv", partial_derivative(partial_derivative(theta, av), av)},
      literal ? std::pair<std::string, Expr>{"eta_v - theta_xv", partial_derivative(eta, av) - theta_xv}
              : std::pair<std::string, Expr>{"eta_v - theta_xv/alpha", partial_derivative(eta, av) - theta_xv / alpha},
  };
}

}  // namespace potsym
