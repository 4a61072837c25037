#include <unordered_map>

#include "poly_ops.hpp"
#include "potsym/expr.hpp"

namespace potsym {
namespace {

class Deriver {
 public:
  Deriver(Context& ctx, const std::function<Expr(Atom)>& f) : ctx_(ctx), f_(f) {}

  Expr of(const Expr& e) {
    auto it = memo_.find(e.node());
    if (it != memo_.end()) return it->second;
    Expr dn = of_poly(e.num());
    Expr result;
    if (e.is_polynomial()) {
      result = dn;
    } else {
      Expr num = ctx_.from_poly(e.num());
      Expr den = ctx_.from_poly(e.den());
      Expr dd = of_poly(e.den());
      result = (dn * den - num * dd) / (den * den);
    }
    memo_.emplace(e.node(), result);
    return result;
  }

 private:
  Expr atom_derivative(Atom a) {
    if (a.kind() == AtomKind::Log) {
      Expr arg = ctx_.log_argument(a);
      Expr d = of(arg);
      return d.is_zero() ? d : d / arg;
    }
    return f_(a);
  }

  Expr of_poly(const Poly& p) {
    Poly acc;
    Expr extra = ctx_.zero();
    auto contribute = [&](const Expr& factor, const Monomial& rest, const Rational& c) {
      if (factor.is_zero()) return;
      if (factor.is_polynomial()) {
        for (const auto& t : factor.num())
          acc.push_back(Term{detail::mono_mul(ctx_, t.mono, rest), t.coef * c});
      } else {
        extra = extra + factor * ctx_.from_poly(Poly{Term{rest, c}});
      }
    };
    for (const auto& term : p) {
      for (std::size_t i = 0; i < term.mono.powers.size(); ++i) {
        auto [a, k] = term.mono.powers[i];
        Expr da = atom_derivative(a);
        if (da.is_zero()) continue;
        Monomial rest = term.mono;
        if (k == 1) rest.powers.erase(rest.powers.begin() + static_cast<long>(i));
        else rest.powers[i].second = k - 1;
        contribute(da, rest, term.coef * k);
      }
      if (term.mono.exp) {
        Expr darg = of(ctx_.wrap(term.mono.exp));
        contribute(darg, term.mono, term.coef);
      }
    }
    detail::canonical_order(acc);
    return ctx_.from_poly(std::move(acc)) + extra;
  }

  Context& ctx_;
  const std::function<Expr(Atom)>& f_;
  std::unordered_map<const Node*, Expr> memo_;
};

class Substituter {
 public:
  Substituter(Context& ctx, const AtomMap& b) : ctx_(ctx), bindings_(b) {}

  Expr of(const Expr& e) {
    if (!touches(e.node())) return e;
    auto it = memo_.find(e.node());
    if (it != memo_.end()) return it->second;
    Expr r = of_poly(e.num()) / of_poly(e.den());
    memo_.emplace(e.node(), r);
    return r;
  }

 private:
  bool touches(const Node* n) {
    auto it = touch_.find(n);
    if (it != touch_.end()) return it->second;
    bool hit = false;
    for (const Poly* p : {&n->num, &n->den}) {
      for (const auto& t : *p) {
        for (auto [a, e] : t.mono.powers) {
          if (bindings_.count(a) || (a.kind() == AtomKind::Log && touches(ctx_.log_argument(a).node()))) {
            hit = true;
            break;
          }
        }
        if (!hit && t.mono.exp && touches(t.mono.exp)) hit = true;
        if (hit) break;
      }
      if (hit) break;
    }
    touch_.emplace(n, hit);
    return hit;
  }

  Expr image(Atom a) {
    auto it = bindings_.find(a);
    if (it != bindings_.end()) return it->second;
    if (a.kind() == AtomKind::Log) return ctx_.log(of(ctx_.log_argument(a)));
    return ctx_.atom(a);
  }

  Expr of_poly(const Poly& p) {
    Poly untouched;
    Expr sum = ctx_.zero();
    for (const auto& t : p) {
      bool hit = t.mono.exp && touches(t.mono.exp);
      for (auto [a, e] : t.mono.powers)
        if (bindings_.count(a) || (a.kind() == AtomKind::Log && touches(ctx_.log_argument(a).node()))) hit = true;
      if (!hit) {
        untouched.push_back(t);
        continue;
      }
      Expr v = ctx_.rational(t.coef);
      for (auto [a, e] : t.mono.powers) v = v * image(a).pow(e);
      if (t.mono.exp) v = v * ctx_.exp(of(ctx_.wrap(t.mono.exp)));
      sum = sum + v;
    }
    return ctx_.from_poly(std::move(untouched)) + sum;
  }

  Context& ctx_;
  const AtomMap& bindings_;
  std::unordered_map<const Node*, Expr> memo_;
  std::unordered_map<const Node*, bool> touch_;
};

void collect_atoms(const Expr& e, bool deep, std::set<Atom>& out, std::set<const Node*>& seen) {
  if (!seen.insert(e.node()).second) return;
  for (const Poly* p : {&e.num(), &e.den()}) {
    for (const auto& t : *p) {
      for (auto [a, k] : t.mono.powers) {
        out.insert(a);
        if (deep && a.kind() == AtomKind::Log) collect_atoms(e.context().log_argument(a), deep, out, seen);
      }
      if (deep && t.mono.exp) collect_atoms(e.context().wrap(t.mono.exp), deep, out, seen);
    }
  }
}

}  // namespace

Expr derive(const Expr& e, const std::function<Expr(Atom)>& atom_derivative) {
  Deriver d(e.context(), atom_derivative);
  return d.of(e);
}

Expr partial_derivative(const Expr& e, Atom a) {
  Context& ctx = e.context();
  Expr one = ctx.one(), zero = ctx.zero();
  return derive(e, [&](Atom b) { return b == a ? one : zero; });
}

Expr substitute(const Expr& e, const AtomMap& bindings) {
  if (bindings.empty()) return e;
  Substituter s(e.context(), bindings);
  return s.of(e);
}

std::set<Atom> atoms_of(const Expr& e, bool deep) {
  std::set<Atom> out;
  std::set<const Node*> seen;
  collect_atoms(e, deep, out, seen);
  return out;
}

bool depends_on(const Expr& e, Atom a) { return atoms_of(e, true).count(a) > 0; }

int jet_order(const Expr& e) {
  int order = 0;
  for (Atom a : atoms_of(e, true))
    if (a.kind() == AtomKind::Jet) order = std::max(order, a.index().order());
  return order;
}

}  // namespace potsym
