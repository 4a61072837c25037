#include "potsym/conslaw.hpp"

#include <algorithm>

namespace potsym {

ConservedVector ConservedVector::make(Expr T, Expr X) {
  int order = std::max(jet_order(T), jet_order(X));
  return ConservedVector{std::move(T), std::move(X), order};
}

bool Characteristic::equals(const Characteristic& o) const {
  if (components.size() != o.components.size()) return false;
  for (std::size_t i = 0; i < components.size(); ++i)
    if (!components[i].equals(o.components[i])) return false;
  return true;
}

std::string Characteristic::str() const {
  if (components.size() == 1) return components[0].str();
  std::string s = "(";
  for (std::size_t i = 0; i < components.size(); ++i) s += (i ? ", " : "") + components[i].str();
  return s + ")";
}

namespace {

void check_variables(const ConservedVector& cv, const PDESystem& sys) {
  for (const Expr* e : {&cv.T, &cv.X})
    for (Atom a : atoms_of(*e))
      if (a.kind() == AtomKind::Jet && !sys.has_dependent(a.owner()))
        throw Error(ErrorKind::UnknownSymbol,
                    sys.context().dependent_name(a.owner()) + " is not a dependent variable of " + sys.name());
}

Expr divergence(const ConservedVector& cv) {
  return total_derivative(cv.T, Direction::T) + total_derivative(cv.X, Direction::X);
}

}  // namespace

Verdict verify_conservation_law(const ConservedVector& cv, const PDESystem& sys) {
  check_variables(cv, sys);
  Expr r = sys.reduce(divergence(cv));
  return Verdict{r.is_zero(), {r}};
}

Characteristic extract_characteristic(const ConservedVector& cv, const PDESystem& sys) {
  check_variables(cv, sys);
  Context& ctx = sys.context();
  Expr r = sys.reduce_with_slacks(divergence(cv));

  std::vector<Atom> slacks;
  for (Atom a : atoms_of(r))
    if (sys.slack_equation(a)) slacks.push_back(a);
  AtomMap drop;
  for (Atom s : slacks) drop.emplace(s, ctx.zero());

  Expr rest = sys.reduce(substitute(r, drop));
  if (!rest.is_zero())
    throw Error(ErrorKind::NotAConservationLaw, "divergence does not vanish on solutions of " + sys.name() + ": " + rest.str());

  std::vector<Expr> lambda(sys.equations().size(), ctx.zero());
  for (Atom s : slacks) {
    Expr c = partial_derivative(r, s);
    for (Atom a : atoms_of(c))
      if (sys.slack_equation(a))
        throw Error(ErrorKind::NotLinearInSlack, "divergence is not linear in the equations of " + sys.name());
    DerivIndex k = s.index();
    Expr term = total_derivative(c, k);
    if (k.order() % 2) term = -term;
    std::size_t eq = *sys.slack_equation(s);
    lambda[eq] = lambda[eq] + term;
  }
  for (Expr& l : lambda) l = sys.reduce(l);
  return Characteristic{std::move(lambda)};
}

bool is_trivial(const ConservedVector& cv, const PDESystem& sys) {
  for (const Expr& c : extract_characteristic(cv, sys).components)
    if (!c.is_zero()) return false;
  return true;
}

bool are_equivalent(const ConservedVector& a, const ConservedVector& b, const PDESystem& sys) {
  return is_trivial(a - b, sys);
}

PDESystem build_potential_system(const ConservedVector& cv, const PDESystem& sys, const std::string& potential,
                                 const std::string& name) {
  Context& ctx = sys.context();
  if (!verify_conservation_law(cv, sys).holds)
    throw Error(ErrorKind::IncompatiblePotential, "v_x = T, v_t = -X is compatible only for a conserved vector of " + sys.name());
  if (potential == "t" || potential == "x" || ctx.find_param_function(potential))
    throw Error(ErrorKind::NameCollision, "potential name " + potential + " is already in use");
  if (auto id = ctx.find_dependent(potential); id && sys.has_dependent(*id))
    throw Error(ErrorKind::NameCollision, "potential name " + potential + " is already a dependent of " + sys.name());
  int v = ctx.dependent(potential);

  std::vector<Rule> eqs;
  const auto& base = sys.equations();
  bool single_evolution = base.size() == 1 && base[0].lead.index() == DerivIndex{1, 0};
  if (!single_evolution) eqs = base;
  eqs.push_back(Rule{Atom::jet(v, {0, 1}), sys.reduce(cv.T), ctx.zero(), false});
  eqs.push_back(Rule{Atom::jet(v, {1, 0}), -sys.reduce(cv.X), ctx.zero(), false});
  std::vector<int> deps = sys.dependents();
  deps.push_back(v);

  PDESystem out;
  try {
    out = PDESystem::create(ctx, name, deps, std::move(eqs), sys.params());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::IncompatibleSystem) throw;
    throw Error(ErrorKind::IncompatiblePotential, e.what());
  }
  for (std::size_t i = 0; i < base.size(); ++i)
    if (!out.reduce(sys.operator_expr(i)).is_zero())
      throw Error(ErrorKind::IncompatiblePotential,
                  "potential system " + name + " does not imply " + ctx.atom_name(base[i].lead) + " = " + base[i].rhs.str());
  return out;
}

PDESystem potential_equation(const PDESystem& potsys, const std::string& name) {
  Context& ctx = potsys.context();
  auto fail = [&](const std::string& why) { return Error(ErrorKind::NotEliminable, why); };
  if (potsys.dependents().size() != 2) throw fail("potential equation needs exactly two dependents");
  const Rule *rx = nullptr, *rt = nullptr;
  int v = -1;
  for (int dep : potsys.dependents()) {
    const Rule *a = nullptr, *b = nullptr;
    for (const Rule& r : potsys.equations()) {
      if (r.lead == Atom::jet(dep, {0, 1})) a = &r;
      if (r.lead == Atom::jet(dep, {1, 0})) b = &r;
    }
    if (a && b) {
      rx = a;
      rt = b;
      v = dep;
    }
  }
  if (!rx || potsys.equations().size() != 2) throw fail(potsys.name() + " is not a potential system");
  int u = potsys.dependents()[0] == v ? potsys.dependents()[1] : potsys.dependents()[0];
  Atom u0 = Atom::jet(u, {});
  for (Atom a : atoms_of(rx->rhs))
    if (a.kind() == AtomKind::Jet && a != u0)
      throw fail(ctx.atom_name(rx->lead) + " rule involves " + ctx.atom_name(a));
  Expr p = partial_derivative(rx->rhs, u0);
  if (p.is_zero() || depends_on(p, u0)) throw fail(ctx.dependent_name(u) + " cannot be isolated from the " + ctx.atom_name(rx->lead) + " rule");
  Expr q = rx->rhs - p * ctx.atom(u0);
  Expr u_expr = (ctx.jet(v, {0, 1}) - q) / p;

  AtomMap b;
  for (Atom a : atoms_of(rt->rhs))
    if (a.kind() == AtomKind::Jet && a.owner() == u) b.emplace(a, total_derivative(u_expr, a.index()));
  Expr rhs = substitute(rt->rhs, b);
  for (Atom a : atoms_of(rhs))
    if (a.kind() == AtomKind::Jet && a.owner() == u) throw fail("elimination left " + ctx.atom_name(a));
  return PDESystem::create(ctx, name, {v}, {Rule{rt->lead, rhs, ctx.zero(), false}}, potsys.params());
}

}  // namespace potsym
