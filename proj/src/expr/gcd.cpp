// Multivariate polynomial GCD over Q by recursive primitive pseudo-remainder
// sequences.  Kernel polynomials are first mapped to plain polynomials over
// integer-indexed variables; every distinct exp argument becomes one extra
// variable.

#include <algorithm>
#include <map>

#include "poly_ops.hpp"

namespace potsym {
namespace {

using SMono = std::vector<std::pair<int, int>>;  // ascending variable index

struct SMonoLess {
  bool operator()(const SMono& a, const SMono& b) const {
    auto ia = a.rbegin(), ib = b.rbegin();
    for (; ia != a.rend() && ib != b.rend(); ++ia, ++ib) {
      if (ia->first != ib->first) return ia->first < ib->first;
      if (ia->second != ib->second) return ia->second < ib->second;
    }
    return ia == a.rend() && ib != b.rend();
  }
};

using SPoly = std::map<SMono, Rational, SMonoLess>;

void add_term(SPoly& p, const SMono& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = p.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

SMono mono_mul(const SMono& a, const SMono& b) {
  SMono out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      out.push_back(a[i++]);
    } else if (b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back(b[j]);
  return out;
}

// a / b when b divides a
std::optional<SMono> mono_div(const SMono& a, const SMono& b) {
  SMono out;
  std::size_t i = 0;
  for (auto [v, e] : b) {
    while (i < a.size() && a[i].first < v) out.push_back(a[i++]);
    if (i == a.size() || a[i].first != v || a[i].second < e) return std::nullopt;
    if (a[i].second > e) out.emplace_back(v, a[i].second - e);
    ++i;
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  return out;
}

SPoly mul(const SPoly& a, const SPoly& b) {
  SPoly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) add_term(out, mono_mul(ma, mb), ca * cb);
  return out;
}

SPoly sub(const SPoly& a, const SPoly& b) {
  SPoly out = a;
  for (const auto& [m, c] : b) add_term(out, m, -c);
  return out;
}

bool is_const(const SPoly& p) { return p.size() == 1 && p.begin()->first.empty(); }

int degree(const SPoly& p, int v) {
  int d = 0;
  for (const auto& [m, c] : p)
    for (auto [w, e] : m)
      if (w == v) d = std::max(d, e);
  return d;
}

int max_var(const SPoly& p) {
  int v = -1;
  for (const auto& [m, c] : p)
    if (!m.empty()) v = std::max(v, m.back().first);
  return v;
}

// Coefficient of v^d, as a polynomial in the remaining variables.
SPoly coeff(const SPoly& p, int v, int d) {
  SPoly out;
  for (const auto& [m, c] : p) {
    int e = 0;
    SMono rest;
    for (auto [w, k] : m) {
      if (w == v) e = k;
      else rest.emplace_back(w, k);
    }
    if (e == d) add_term(out, rest, c);
  }
  return out;
}

std::optional<SPoly> divide_exact(SPoly a, const SPoly& b) {
  if (b.empty()) return std::nullopt;
  auto lead_b = std::prev(b.end());
  SPoly q;
  while (!a.empty()) {
    auto lead_a = std::prev(a.end());
    auto m = mono_div(lead_a->first, lead_b->first);
    if (!m) return std::nullopt;
    Rational c = lead_a->second / lead_b->second;
    add_term(q, *m, c);
    for (const auto& [mb, cb] : b) add_term(a, mono_mul(*m, mb), -c * cb);
  }
  return q;
}

SPoly monic(SPoly p) {
  if (p.empty()) return p;
  Rational lc = std::prev(p.end())->second;
  for (auto& [m, c] : p) c /= lc;
  return p;
}

SPoly one() { return SPoly{{SMono{}, Rational(1)}}; }

SPoly gcd(const SPoly& a, const SPoly& b);

// gcd of g with every coefficient of p in v, smallest coefficients first so
// the running gcd stays small.  An empty g starts from the first coefficient.
SPoly gcd_with_coeffs(SPoly g, const SPoly& p, int v) {
  std::vector<SPoly> cs;
  for (int k = degree(p, v); k >= 0; --k)
    if (SPoly c = coeff(p, v, k); !c.empty()) cs.push_back(std::move(c));
  std::stable_sort(cs.begin(), cs.end(), [](const SPoly& a, const SPoly& b) { return a.size() < b.size(); });
  for (const SPoly& c : cs) {
    g = g.empty() ? monic(c) : gcd(g, c);
    if (is_const(g)) return one();
  }
  return g;
}

SPoly content(const SPoly& p, int v) { return gcd_with_coeffs({}, p, v); }

bool has_var(const SPoly& p, int v) {
  for (const auto& [m, c] : p)
    for (auto [w, e] : m)
      if (w == v) return true;
  return false;
}

SPoly primitive(const SPoly& p, int v) {
  SPoly c = content(p, v);
  if (is_const(c)) return p;
  return *divide_exact(p, c);
}

SPoly pseudo_remainder(SPoly r, const SPoly& b, int v) {
  int db = degree(b, v);
  SPoly lcb = coeff(b, v, db);
  while (!r.empty()) {
    int dr = degree(r, v);
    if (dr < db) break;
    SPoly lcr = coeff(r, v, dr);
    SPoly shifted;
    SMono vpow;
    if (dr > db) vpow.emplace_back(v, dr - db);
    for (const auto& [m, c] : lcr) add_term(shifted, mono_mul(m, vpow), c);
    r = sub(mul(lcb, r), mul(shifted, b));
  }
  return r;
}

SPoly gcd(const SPoly& a, const SPoly& b) {
  if (a.empty()) return monic(b);
  if (b.empty()) return monic(a);
  if (is_const(a) || is_const(b)) return one();
  // A variable of only one operand cannot occur in the gcd.
  for (const auto& [m, c] : a)
    for (auto [w, e] : m)
      if (!has_var(b, w)) return gcd_with_coeffs(monic(b), a, w);
  for (const auto& [m, c] : b)
    for (auto [w, e] : m)
      if (!has_var(a, w)) return gcd_with_coeffs(monic(a), b, w);
  int v = std::max(max_var(a), max_var(b));
  SPoly ca = content(a, v), cb = content(b, v);
  SPoly pa = is_const(ca) ? a : *divide_exact(a, ca);
  SPoly pb = is_const(cb) ? b : *divide_exact(b, cb);
  SPoly c = gcd(ca, cb);
  if (degree(pa, v) < degree(pb, v)) std::swap(pa, pb);
  while (!pb.empty()) {
    SPoly r = pseudo_remainder(pa, pb, v);
    pa = std::move(pb);
    pb = r.empty() ? r : monic(primitive(r, v));
    if (!pb.empty() && degree(pb, v) == 0) {
      pa = one();
      break;
    }
  }
  SPoly g = degree(pa, v) == 0 ? one() : primitive(pa, v);
  return monic(mul(c, g));
}

// Translation between kernel polys and SPoly.
struct VarMap {
  std::vector<Atom> atoms;
  std::vector<const Node*> exps;

  void collect(const Poly& p) {
    for (const auto& t : p) {
      for (auto [a, e] : t.mono.powers) atoms.push_back(a);
      if (t.mono.exp) exps.push_back(t.mono.exp);
    }
  }
  void finish() {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    std::sort(exps.begin(), exps.end(), [](const Node* a, const Node* b) { return a->serial < b->serial; });
    exps.erase(std::unique(exps.begin(), exps.end()), exps.end());
  }
  int atom_var(Atom a) const {
    return static_cast<int>(std::lower_bound(atoms.begin(), atoms.end(), a) - atoms.begin());
  }
  int exp_var(const Node* n) const {
    auto it = std::find(exps.begin(), exps.end(), n);
    return static_cast<int>(atoms.size() + static_cast<std::size_t>(it - exps.begin()));
  }

  SPoly to_s(const Poly& p) const {
    SPoly out;
    for (const auto& t : p) {
      SMono m;
      for (auto [a, e] : t.mono.powers) m.emplace_back(atom_var(a), e);
      if (t.mono.exp) m.emplace_back(exp_var(t.mono.exp), 1);
      add_term(out, m, t.coef);
    }
    return out;
  }

  Poly from_s(Context& ctx, const SPoly& p) const {
    Poly out;
    for (const auto& [m, c] : p) {
      Monomial mono;
      Expr arg = ctx.zero();
      bool has_exp = false;
      for (auto [v, e] : m) {
        if (static_cast<std::size_t>(v) < atoms.size()) {
          mono.powers.emplace_back(atoms[static_cast<std::size_t>(v)], e);
        } else {
          arg = arg + ctx.wrap(exps[static_cast<std::size_t>(v) - atoms.size()]) * static_cast<long>(e);
          has_exp = true;
        }
      }
      if (has_exp && !arg.is_zero()) mono.exp = arg.node();
      out.push_back(Term{std::move(mono), c});
    }
    detail::canonical_order(out);
    return out;
  }
};

}  // namespace

namespace detail {

bool cancel_common_factor(Context& ctx, Poly& num, Poly& den) {
  VarMap vars;
  vars.collect(num);
  vars.collect(den);
  vars.finish();
  SPoly sn = vars.to_s(num), sd = vars.to_s(den);
  SPoly g = gcd(sn, sd);
  if (is_const(g)) return false;
  num = vars.from_s(ctx, *divide_exact(sn, g));
  den = vars.from_s(ctx, *divide_exact(sd, g));
  return true;
}

}  // namespace detail

Poly poly_gcd(Context& ctx, const Poly& a, const Poly& b) {
  VarMap vars;
  vars.collect(a);
  vars.collect(b);
  vars.finish();
  return vars.from_s(ctx, gcd(vars.to_s(a), vars.to_s(b)));
}

}  // namespace potsym
