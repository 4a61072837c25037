#include "potsym/jet.hpp"

#include <algorithm>
#include <set>

namespace potsym {

Expr total_derivative(const Expr& e, Direction d) {
  Context& ctx = e.context();
  Expr one = ctx.one(), zero = ctx.zero();
  return derive(e, [&](Atom a) -> Expr {
    switch (a.kind()) {
      case AtomKind::Independent: return a == Atom::independent(d) ? one : zero;
      case AtomKind::Jet:
      case AtomKind::Param:
      case AtomKind::Formal: return ctx.atom(a.shifted(d));
      default: return zero;
    }
  });
}

Expr total_derivative(const Expr& e, DerivIndex k) {
  Expr r = e;
  for (int i = 0; i < k.kx && !r.is_zero(); ++i) r = total_derivative(r, Direction::X);
  for (int i = 0; i < k.kt && !r.is_zero(); ++i) r = total_derivative(r, Direction::T);
  return r;
}

Expr explicit_derivative(const Expr& e, Direction d) {
  Context& ctx = e.context();
  Expr one = ctx.one(), zero = ctx.zero();
  return derive(e, [&](Atom a) -> Expr {
    if (a.kind() == AtomKind::Independent) return a == Atom::independent(d) ? one : zero;
    if (a.kind() == AtomKind::Param) return ctx.atom(a.shifted(d));
    return zero;
  });
}

std::vector<ParamFunction> params_in(const std::vector<Expr>& exprs, const ParamTable& table) {
  std::set<int> ids;
  for (const Expr& e : exprs)
    for (Atom a : atoms_of(e))
      if (a.kind() == AtomKind::Param) ids.insert(a.owner());
  std::vector<ParamFunction> out;
  for (int id : ids) {
    auto it = table.find(id);
    if (it != table.end()) out.push_back(it->second);
  }
  return out;
}

void validate_constraint(const ParamFunction& p) {
  if (!p.lead) return;
  if (p.lead->kt < 1)
    throw Error(ErrorKind::BadConstraint, "constraint for " + p.name + " must solve for a t-derivative");
  for (Atom a : atoms_of(p.rhs)) {
    if (a.kind() == AtomKind::Independent || a.kind() == AtomKind::Log) continue;
    if (a.kind() == AtomKind::Param && a.owner() == p.id && a.index().kt < p.lead->kt) continue;
    throw Error(ErrorKind::BadConstraint, "constraint for " + p.name + " may only involve t, x and lower t-derivatives of " + p.name);
  }
}

// ---------------------------------------------------------------- reduction

class PDESystem::Reducer {
 public:
  Reducer(const PDESystem& sys, bool slack) : sys_(sys), slack_(slack) {}

  Expr reduce(const Expr& e) {
    bool top = depth_++ == 0;
    if (top) steps_ = 0;
    struct Guard {
      int& d;
      ~Guard() { --d; }
    } guard{depth_};
    AtomMap b;
    for (Atom a : atoms_of(e, true))
      if (auto nf = normal_form(a)) b.emplace(a, *nf);
    return b.empty() ? e : substitute(e, b);
  }

 private:
  std::optional<Expr> normal_form(Atom a) {
    if (a.kind() != AtomKind::Jet && a.kind() != AtomKind::Param) return std::nullopt;
    auto it = memo_.find(a);
    if (it != memo_.end()) return it->second;
    const Rule* r = sys_.rule_for(a);
    if (!r) return std::nullopt;
    Context& ctx = sys_.context();
    if (!active_.insert(a).second)
      throw Error(ErrorKind::NonTerminating, "cyclic rewrite through " + ctx.atom_name(a) + " in " + sys_.name());
    if (++steps_ > kReductionStepBound)
      throw Error(ErrorKind::NonTerminating, "reduction in " + sys_.name() + " exceeded the step bound");
    DerivIndex lead = r->lead.index(), k = a.index();
    Expr value;
    if (k == lead) {
      value = reduce(r->rhs);
      if (slack_ && a.kind() == AtomKind::Jet) value = value + slack_term(*r);
    } else {
      Direction d = k.kx > lead.kx ? Direction::X : Direction::T;
      Expr prev = *normal_form(a.with_index(k.shifted(d, -1)));
      value = reduce(total_derivative(prev, d));
    }
    active_.erase(a);
    memo_.emplace(a, value);
    return value;
  }

  Expr slack_term(const Rule& r) {
    if (r.consequence) return reduce(r.slack);
    const auto& eqs = sys_.equations();
    for (std::size_t i = 0; i < eqs.size(); ++i)
      if (eqs[i].lead == r.lead) return sys_.context().formal(sys_.slack_symbol(i));
    return sys_.context().zero();
  }

  const PDESystem& sys_;
  bool slack_;
  std::map<Atom, Expr> memo_;
  std::set<Atom> active_;
  int steps_ = 0, depth_ = 0;
};

namespace {

bool rank_less(Atom a, Atom b) {
  DerivIndex ka = a.index(), kb = b.index();
  if (ka.kt != kb.kt) return ka.kt < kb.kt;
  if (ka.order() != kb.order()) return ka.order() < kb.order();
  return a.owner() < b.owner();
}

}  // namespace

PDESystem::Reducer& PDESystem::reducer(bool slack) const {
  auto& slot = slack ? cache_.slacked : cache_.plain;
  if (!slot) slot = std::make_shared<Reducer>(*this, slack);
  return *slot;
}

const Rule* PDESystem::rule_for(Atom a) const {
  const Rule* best = nullptr;
  auto consider = [&](const Rule& r) {
    if (r.lead.kind() != a.kind() || r.lead.owner() != a.owner() || !a.index().covers(r.lead.index())) return;
    if (!best || r.lead.index().kt > best->lead.index().kt ||
        (r.lead.index().kt == best->lead.index().kt && r.lead.index().kx > best->lead.index().kx))
      best = &r;
  };
  if (a.kind() == AtomKind::Jet) {
    for (const Rule& r : equations_) consider(r);
    for (const Rule& r : consequences_) consider(r);
  } else if (a.kind() == AtomKind::Param) {
    for (const Rule& r : constraints_) consider(r);
  }
  return best;
}

const ParamFunction* PDESystem::param(int id) const {
  for (const auto& p : params_)
    if (p.id == id) return &p;
  return nullptr;
}

bool PDESystem::has_dependent(int id) const {
  return std::find(dependents_.begin(), dependents_.end(), id) != dependents_.end();
}

Expr PDESystem::operator_expr(std::size_t i) const {
  const Rule& r = equations_.at(i);
  return ctx_->atom(r.lead) - r.rhs;
}

std::optional<std::size_t> PDESystem::slack_equation(Atom a) const {
  if (a.kind() != AtomKind::Formal) return std::nullopt;
  for (std::size_t i = 0; i < slack_ids_.size(); ++i)
    if (slack_ids_[i] == a.owner()) return i;
  return std::nullopt;
}

Expr PDESystem::reduce(const Expr& e) const { return reducer(false).reduce(e); }
Expr PDESystem::reduce_with_slacks(const Expr& e) const { return reducer(true).reduce(e); }

PDESystem PDESystem::with_params(const std::vector<ParamFunction>& extra) const {
  std::vector<ParamFunction> merged = params_;
  bool changed = false;
  for (const auto& p : extra) {
    if (param(p.id)) continue;
    merged.push_back(p);
    changed = true;
  }
  if (!changed) return *this;
  return create(*ctx_, name_, dependents_, equations_, std::move(merged));
}

PDESystem PDESystem::create(Context& ctx, std::string name, std::vector<int> dependents,
                            std::vector<Rule> equations, std::vector<ParamFunction> params) {
  PDESystem s;
  s.ctx_ = &ctx;
  s.name_ = std::move(name);
  std::sort(dependents.begin(), dependents.end());
  dependents.erase(std::unique(dependents.begin(), dependents.end()), dependents.end());
  s.dependents_ = std::move(dependents);
  s.params_ = std::move(params);

  for (const auto& p : s.params_) {
    validate_constraint(p);
    if (p.lead) s.constraints_.push_back(Rule{*p.lead_atom(), p.rhs, ctx.zero(), false});
  }
  for (std::size_t i = 0; i < equations.size(); ++i) {
    Rule& r = equations[i];
    r.consequence = false;
    r.slack = ctx.zero();
    if (r.lead.kind() != AtomKind::Jet || !s.has_dependent(r.lead.owner()))
      throw Error(ErrorKind::BadRule, "rule lead must be a coordinate of a dependent of " + s.name_);
    for (std::size_t j = 0; j < i; ++j)
      if (equations[j].lead == r.lead)
        throw Error(ErrorKind::BadRule, "two rules for " + ctx.atom_name(r.lead) + " in " + s.name_);
  }
  for (const Rule& r : equations) {
    for (Atom a : atoms_of(r.rhs)) {
      if (a.kind() == AtomKind::Jet && !s.has_dependent(a.owner()))
        throw Error(ErrorKind::BadRule, ctx.atom_name(a) + " is not a coordinate of " + s.name_);
      if (a.kind() == AtomKind::Formal)
        throw Error(ErrorKind::BadRule, "formal symbol in rule for " + ctx.atom_name(r.lead));
      for (const Rule& o : equations)
        if (a.kind() == AtomKind::Jet && a.owner() == o.lead.owner() && a.index().covers(o.lead.index()))
          throw Error(ErrorKind::BadRule, "right-hand side of " + ctx.atom_name(r.lead) + " contains " +
                                              ctx.atom_name(a) + ", a derivative of a leading coordinate");
    }
  }
  s.equations_ = std::move(equations);
  for (std::size_t i = 0; i < s.equations_.size(); ++i)
    s.slack_ids_.push_back(ctx.formal_symbol("S" + std::to_string(i + 1) + "[" + s.name_ + "]"));
  s.complete();
  return s;
}

void PDESystem::complete() {
  Context& ctx = *ctx_;
  auto slack_of = [&](std::size_t idx) -> Expr {
    if (idx < equations_.size()) return ctx.formal(slack_ids_[idx]);
    return consequences_[idx - equations_.size()].slack;
  };
  auto rule_at = [&](std::size_t idx) -> const Rule& {
    return idx < equations_.size() ? equations_[idx] : consequences_[idx - equations_.size()];
  };
  for (;;) {
    bool added = false;
    std::size_t n = equations_.size() + consequences_.size();
    for (std::size_t i = 0; i < n && !added; ++i) {
      for (std::size_t j = i + 1; j < n && !added; ++j) {
        const Rule& ri = rule_at(i);
        const Rule& rj = rule_at(j);
        if (ri.lead.owner() != rj.lead.owner()) continue;
        DerivIndex li = ri.lead.index(), lj = rj.lead.index();
        DerivIndex m{std::max(li.kt, lj.kt), std::max(li.kx, lj.kx)};
        Expr side_i = reduce_with_slacks(total_derivative(ri.rhs + slack_of(i), m - li));
        Expr side_j = reduce_with_slacks(total_derivative(rj.rhs + slack_of(j), m - lj));
        Expr delta = side_i - side_j;
        AtomMap drop;
        for (Atom a : atoms_of(delta))
          if (slack_equation(a)) drop.emplace(a, ctx.zero());
        Expr delta0 = substitute(delta, drop);
        if (delta0.is_zero()) continue;

        std::optional<Atom> c;
        for (Atom a : atoms_of(delta0))
          if (a.kind() == AtomKind::Jet && (!c || rank_less(*c, a))) c = a;
        auto incompatible = [&] {
          return Error(ErrorKind::IncompatibleSystem,
                       "rules for " + ctx.atom_name(ri.lead) + " and " + ctx.atom_name(rj.lead) + " in " + name_ +
                           " disagree: " + delta0.str());
        };
        if (!c) throw incompatible();
        bool owner_free = true;
        for (std::size_t k = 0; k < n; ++k)
          if (rule_at(k).lead.owner() == c->owner()) owner_free = false;
        Expr p = partial_derivative(delta0, *c);
        if (!owner_free || depends_on(p, *c)) throw incompatible();
        Expr q = delta0 - p * ctx.atom(*c);
        Rule cons{*c, -q / p, -(delta - delta0) / p, true};
        consequences_.push_back(std::move(cons));
        cache_ = Cache();
        added = true;
      }
    }
    if (!added) return;
  }
}

// ---------------------------------------------------------------- vector fields

VectorField VectorField::zero(Context& ctx) { return VectorField{ctx.zero(), ctx.zero(), {}}; }

Expr VectorField::eta_of(int dependent) const {
  auto it = eta.find(dependent);
  return it == eta.end() ? tau.context().zero() : it->second;
}

static VectorField combine(const VectorField& a, const VectorField& b, int sign) {
  VectorField r{a.tau + b.tau * sign, a.xi + b.xi * sign, a.eta};
  for (const auto& [d, e] : b.eta) r.eta[d] = a.eta_of(d) + e * sign;
  for (auto it = r.eta.begin(); it != r.eta.end();) it = it->second.is_zero() ? r.eta.erase(it) : std::next(it);
  return r;
}

VectorField VectorField::operator+(const VectorField& o) const { return combine(*this, o, 1); }
VectorField VectorField::operator-(const VectorField& o) const { return combine(*this, o, -1); }

VectorField VectorField::operator*(const Expr& c) const {
  VectorField r{tau * c, xi * c, {}};
  for (const auto& [d, e] : eta)
    if (Expr v = e * c; !v.is_zero()) r.eta[d] = v;
  return r;
}

bool VectorField::is_zero() const {
  if (!tau.is_zero() || !xi.is_zero()) return false;
  for (const auto& [d, e] : eta)
    if (!e.is_zero()) return false;
  return true;
}

bool VectorField::equals(const VectorField& o) const { return (*this - o).is_zero(); }

std::string VectorField::str() const {
  Context& ctx = context();
  std::vector<std::pair<Expr, std::string>> parts{{tau, "dt"}, {xi, "dx"}};
  for (const auto& [d, e] : eta) parts.emplace_back(e, "d" + ctx.dependent_name(d));
  std::string out;
  for (const auto& [c, marker] : parts) {
    if (c.is_zero()) continue;
    std::string s;
    if (c == ctx.one()) s = marker;
    else if (c == -ctx.one()) s = "-" + marker;
    else if (c.num().size() == 1 && c.is_polynomial()) s = c.str() + "*" + marker;
    else s = "(" + c.str() + ")*" + marker;
    if (out.empty()) out = s;
    else if (s[0] == '-') out += " - " + s.substr(1);
    else out += " + " + s;
  }
  return out.empty() ? "0" : out;
}

void validate_point_field(const VectorField& q) {
  auto check = [&](const Expr& e) {
    for (Atom a : atoms_of(e))
      if ((a.kind() == AtomKind::Jet && a.index().order() > 0) || a.kind() == AtomKind::Formal)
        throw Error(ErrorKind::InvalidArgument,
                    "vector field coefficient depends on " + e.context().atom_name(a) + "; only point fields are supported");
  };
  check(q.tau);
  check(q.xi);
  for (const auto& [d, e] : q.eta) check(e);
}

namespace {

// Prolonged coefficients for one dependent, extended on demand.
class Prolongation {
 public:
  Prolongation(const VectorField& q, int dep) : q_(q), dep_(dep) {
    coef_[{0, 0}] = q.eta_of(dep);
  }

  const Expr& at(DerivIndex k) {
    auto it = coef_.find(k);
    if (it != coef_.end()) return it->second;
    Direction d = k.kx > 0 ? Direction::X : Direction::T;
    DerivIndex prev = k.shifted(d, -1);
    Context& ctx = q_.context();
    Expr base = total_derivative(at(prev), d);
    Expr v = base - total_derivative(q_.tau, d) * ctx.jet(dep_, prev.shifted(Direction::T)) -
             total_derivative(q_.xi, d) * ctx.jet(dep_, prev.shifted(Direction::X));
    return coef_.emplace(k, v).first->second;
  }

 private:
  const VectorField& q_;
  int dep_;
  std::map<DerivIndex, Expr> coef_;
};

}  // namespace

std::map<Atom, Expr> prolong_vector_field(const VectorField& q, const std::vector<int>& dependents, int order) {
  std::map<Atom, Expr> out;
  for (int dep : dependents) {
    Prolongation pr(q, dep);
    for (int n = 0; n <= order; ++n)
      for (int kt = 0; kt <= n; ++kt) {
        DerivIndex k{kt, n - kt};
        out.emplace(Atom::jet(dep, k), pr.at(k));
      }
  }
  return out;
}

Expr apply_prolonged(const VectorField& q, const Expr& e) {
  Expr r = q.tau * explicit_derivative(e, Direction::T) + q.xi * explicit_derivative(e, Direction::X);
  std::map<int, Prolongation> prs;
  for (Atom a : atoms_of(e)) {
    if (a.kind() != AtomKind::Jet) continue;
    auto it = prs.find(a.owner());
    if (it == prs.end()) it = prs.emplace(a.owner(), Prolongation(q, a.owner())).first;
    const Expr& coef = it->second.at(a.index());
    if (!coef.is_zero()) r = r + coef * partial_derivative(e, a);
  }
  return r;
}

}  // namespace potsym
