#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "poly_ops.hpp"
#include "potsym/expr.hpp"

namespace potsym {

std::string suffix(const DerivIndex& k) {
  return std::string(static_cast<std::size_t>(k.kt), 't') + std::string(static_cast<std::size_t>(k.kx), 'x');
}

// ---------------------------------------------------------------- atoms

Atom Atom::pack(AtomKind kind, int owner, DerivIndex k) {
  if (owner < 0 || owner >= (1 << 20) || k.kt < 0 || k.kx < 0 || k.kt >= 1024 || k.kx >= 1024)
    throw Error(ErrorKind::InvalidArgument, "atom index out of range");
  return Atom((static_cast<std::uint64_t>(kind) << 60) | (static_cast<std::uint64_t>(owner) << 40) |
              (static_cast<std::uint64_t>(k.kt) << 30) | (static_cast<std::uint64_t>(k.kx) << 20));
}

Atom Atom::independent(Direction d) { return pack(AtomKind::Independent, d == Direction::T ? 0 : 1, {}); }
Atom Atom::jet(int dependent, DerivIndex k) { return pack(AtomKind::Jet, dependent, k); }
Atom Atom::param(int function, DerivIndex k) { return pack(AtomKind::Param, function, k); }
Atom Atom::formal(int symbol, DerivIndex k) { return pack(AtomKind::Formal, symbol, k); }
Atom Atom::log_kernel(std::uint32_t serial) { return pack(AtomKind::Log, static_cast<int>(serial), {}); }

Atom Atom::with_index(DerivIndex k) const {
  if (!differentiable()) throw Error(ErrorKind::InvalidArgument, "atom has no derivative index");
  return pack(kind(), owner(), k);
}

int compare(const Monomial& a, const Monomial& b) {
  auto ia = a.powers.rbegin(), ib = b.powers.rbegin();
  for (; ia != a.powers.rend() && ib != b.powers.rend(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first > ib->first ? 1 : -1;
    if (ia->second != ib->second) return ia->second > ib->second ? 1 : -1;
  }
  if (ia != a.powers.rend()) return 1;
  if (ib != b.powers.rend()) return -1;
  if (a.exp == b.exp) return 0;
  if (!a.exp) return -1;
  if (!b.exp) return 1;
  return a.exp->serial > b.exp->serial ? 1 : -1;
}

// ---------------------------------------------------------------- polys

namespace detail {

Poly constant(const Rational& c) {
  if (c == 0) return {};
  return {Term{Monomial{}, c}};
}

bool is_one(const Poly& p) { return p.size() == 1 && p[0].mono.is_unit() && !p[0].mono.exp && p[0].coef == 1; }

bool is_constant(const Poly& p) {
  return p.empty() || (p.size() == 1 && p[0].mono.is_unit() && !p[0].mono.exp);
}

Poly add(const Poly& a, const Poly& b) {
  Poly out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = compare(a[i].mono, b[j].mono);
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back(b[j++]);
    } else {
      Rational s = a[i].coef + b[j].coef;
      if (s != 0) out.push_back(Term{a[i].mono, s});
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back(b[j]);
  return out;
}

Poly neg(const Poly& a) {
  Poly out = a;
  for (auto& t : out) t.coef = -t.coef;
  return out;
}

Poly scale(const Poly& a, const Rational& c) {
  if (c == 0) return {};
  Poly out = a;
  for (auto& t : out) t.coef *= c;
  return out;
}

void canonical_order(Poly& p) {
  std::sort(p.begin(), p.end(), [](const Term& a, const Term& b) { return compare(a.mono, b.mono) > 0; });
  Poly out;
  out.reserve(p.size());
  for (auto& t : p) {
    if (!out.empty() && out.back().mono == t.mono) {
      out.back().coef += t.coef;
      if (out.back().coef == 0) out.pop_back();
    } else if (t.coef != 0) {
      out.push_back(std::move(t));
    }
  }
  p = std::move(out);
}

Monomial mono_mul(Context& ctx, const Monomial& a, const Monomial& b) {
  Monomial m;
  m.powers.reserve(a.powers.size() + b.powers.size());
  std::size_t i = 0, j = 0;
  while (i < a.powers.size() && j < b.powers.size()) {
    if (a.powers[i].first < b.powers[j].first) {
      m.powers.push_back(a.powers[i++]);
    } else if (b.powers[j].first < a.powers[i].first) {
      m.powers.push_back(b.powers[j++]);
    } else {
      m.powers.emplace_back(a.powers[i].first, a.powers[i].second + b.powers[j].second);
      ++i;
      ++j;
    }
  }
  for (; i < a.powers.size(); ++i) m.powers.push_back(a.powers[i]);
  for (; j < b.powers.size(); ++j) m.powers.push_back(b.powers[j]);
  if (a.exp && b.exp) {
    Expr s = ctx.wrap(a.exp) + ctx.wrap(b.exp);
    m.exp = s.is_zero() ? nullptr : s.node();
  } else {
    m.exp = a.exp ? a.exp : b.exp;
  }
  return m;
}

Poly times_monomial(Context& ctx, const Poly& a, const Monomial& m, const Rational& c) {
  Poly out;
  out.reserve(a.size());
  for (const auto& t : a) out.push_back(Term{mono_mul(ctx, t.mono, m), t.coef * c});
  canonical_order(out);
  return out;
}

Poly mul(Context& ctx, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  Poly out;
  out.reserve(a.size() * b.size());
  for (const auto& ta : a)
    for (const auto& tb : b) out.push_back(Term{mono_mul(ctx, ta.mono, tb.mono), ta.coef * tb.coef});
  canonical_order(out);
  return out;
}

static std::size_t hash_mpz(const mpz_class& z) {
  std::size_t h = static_cast<std::size_t>(mpz_size(z.get_mpz_t()));
  if (mpz_size(z.get_mpz_t()) > 0) h = h * 1000003u ^ static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), 0));
  return h * 31u + static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()) + 1);
}

std::size_t hash(const Poly& p) {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  for (const auto& t : p) {
    for (const auto& [a, e] : t.mono.powers) {
      mix(std::hash<std::uint64_t>{}(a.key()));
      mix(static_cast<std::size_t>(e));
    }
    mix(t.mono.exp ? t.mono.exp->serial + 1 : 0);
    mix(hash_mpz(t.coef.get_num()));
    mix(hash_mpz(t.coef.get_den()));
  }
  return h;
}

}  // namespace detail

// ---------------------------------------------------------------- context

namespace {

struct NodeHash {
  std::size_t operator()(const Node* n) const { return n->hash; }
};
struct NodeEq {
  bool operator()(const Node* a, const Node* b) const { return a->num == b->num && a->den == b->den; }
};

// floor(c) for a rational.
long floor_of(const Rational& c) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), c.get_num_mpz_t(), c.get_den_mpz_t());
  return q.get_si();
}

}  // namespace

struct Context::Impl {
  std::deque<Node> storage;
  std::unordered_set<const Node*, NodeHash, NodeEq> table;
  std::uint64_t next_serial = 0;
  std::unordered_map<const Node*, std::uint32_t> log_ids;
  std::vector<const Node*> log_args;
  std::unordered_map<std::string, int> dep_ids, param_ids, formal_ids;
  std::unordered_map<const Node*, int> log_state;  // exp argument -> has extractable log multiple
};

Context::Context() : impl_(std::make_unique<Impl>()) {
  zero_ = Expr(this, intern({}, unit_poly()));
  one_ = Expr(this, intern(unit_poly(), unit_poly()));
}

Context::~Context() = default;

Poly Context::unit_poly() { return detail::constant(1); }

std::size_t Context::node_count() const { return impl_->storage.size(); }

const Node* Context::intern(Poly num, Poly den) {
  Node probe;
  probe.num = std::move(num);
  probe.den = std::move(den);
  probe.hash = detail::hash(probe.num) * 7919u ^ detail::hash(probe.den);
  auto it = impl_->table.find(&probe);
  if (it != impl_->table.end()) return *it;
  probe.serial = impl_->next_serial++;
  impl_->storage.push_back(std::move(probe));
  const Node* n = &impl_->storage.back();
  impl_->table.insert(n);
  return n;
}

namespace {
int registry(std::unordered_map<std::string, int>& ids, std::vector<std::string>& names, std::string_view name) {
  auto it = ids.find(std::string(name));
  if (it != ids.end()) return it->second;
  int id = static_cast<int>(names.size());
  names.emplace_back(name);
  ids.emplace(std::string(name), id);
  return id;
}
std::optional<int> lookup(const std::unordered_map<std::string, int>& ids, std::string_view name) {
  auto it = ids.find(std::string(name));
  if (it == ids.end()) return std::nullopt;
  return it->second;
}
}  // namespace

int Context::dependent(std::string_view name) { return registry(impl_->dep_ids, dependents_, name); }
int Context::param_function(std::string_view name) { return registry(impl_->param_ids, params_, name); }
int Context::formal_symbol(std::string_view name) { return registry(impl_->formal_ids, formals_, name); }
std::optional<int> Context::find_dependent(std::string_view name) const { return lookup(impl_->dep_ids, name); }
std::optional<int> Context::find_param_function(std::string_view name) const {
  return lookup(impl_->param_ids, name);
}
std::optional<int> Context::find_formal_symbol(std::string_view name) const {
  return lookup(impl_->formal_ids, name);
}

Expr Context::rational(const Rational& v) {
  Rational c = v;
  c.canonicalize();
  if (c == 0) return zero_;
  return Expr(this, intern(detail::constant(c), unit_poly()));
}

Expr Context::atom(Atom a) {
  Monomial m;
  m.powers.emplace_back(a, 1);
  return Expr(this, intern(Poly{Term{std::move(m), Rational(1)}}, unit_poly()));
}

Expr Context::log_argument(Atom a) const {
  if (a.kind() != AtomKind::Log) throw Error(ErrorKind::InvalidArgument, "not a log kernel");
  return Expr(const_cast<Context*>(this), impl_->log_args.at(static_cast<std::size_t>(a.owner())));
}

std::string Context::atom_name(Atom a) const {
  switch (a.kind()) {
    case AtomKind::Independent: return a.owner() == 0 ? "t" : "x";
    case AtomKind::Jet:
    case AtomKind::Param:
    case AtomKind::Formal: {
      const std::string& base = a.kind() == AtomKind::Jet     ? dependent_name(a.owner())
                                : a.kind() == AtomKind::Param ? param_name(a.owner())
                                                              : formal_name(a.owner());
      DerivIndex k = a.index();
      return k.order() == 0 ? base : base + "_" + suffix(k);
    }
    case AtomKind::Log: return "log(" + log_argument(a).str() + ")";
  }
  return "?";
}

// Integer multiples of log kernels that exp(arg) can pull out as powers.
static std::vector<std::pair<Atom, long>> log_multiples(const Expr& arg) {
  std::vector<std::pair<Atom, long>> out;
  auto den = arg.den();
  if (!detail::is_constant(den)) return out;
  Rational d = den[0].coef;
  for (const auto& t : arg.num()) {
    if (t.mono.exp || t.mono.powers.size() != 1) continue;
    auto [a, e] = t.mono.powers[0];
    if (a.kind() != AtomKind::Log || e != 1) continue;
    long k = floor_of(t.coef / d);
    if (k != 0) out.emplace_back(a, k);
  }
  return out;
}

bool Context::has_pending_log(const Node* n) {
  auto check = [this](const Poly& p) {
    for (const auto& t : p) {
      if (!t.mono.exp) continue;
      auto it = impl_->log_state.find(t.mono.exp);
      if (it == impl_->log_state.end()) {
        int s = log_multiples(wrap(t.mono.exp)).empty() ? 0 : 1;
        it = impl_->log_state.emplace(t.mono.exp, s).first;
      }
      if (it->second) return true;
    }
    return false;
  };
  if (n->pending_log < 0) n->pending_log = (check(n->num) || check(n->den)) ? 1 : 0;
  return n->pending_log == 1;
}

Expr Context::exp(const Expr& arg) {
  if (arg.is_zero()) return one_;
  auto mult = log_multiples(arg);
  Expr rest = arg;
  Expr factor = one_;
  for (auto [a, k] : mult) {
    rest = rest - atom(a) * k;
    factor = factor * log_argument(a).pow(static_cast<int>(k));
  }
  if (rest.is_zero()) return factor;
  Monomial m;
  m.exp = rest.node();
  impl_->log_state[rest.node()] = 0;
  Expr e(this, intern(Poly{Term{std::move(m), Rational(1)}}, unit_poly()));
  return factor * e;
}

Expr Context::log(const Expr& arg) {
  if (arg.is_zero()) throw Error(ErrorKind::DivisionByZero, "log(0)");
  if (auto c = arg.constant_value(); c && *c == 1) return zero_;
  // log(exp(s)) -> s
  if (arg.is_polynomial() && arg.num().size() == 1) {
    const Term& t = arg.num()[0];
    if (t.coef == 1 && t.mono.powers.empty() && t.mono.exp) return wrap(t.mono.exp);
  }
  auto it = impl_->log_ids.find(arg.node());
  std::uint32_t id;
  if (it == impl_->log_ids.end()) {
    id = static_cast<std::uint32_t>(impl_->log_args.size());
    impl_->log_args.push_back(arg.node());
    impl_->log_ids.emplace(arg.node(), id);
  } else {
    id = it->second;
  }
  return atom(Atom::log_kernel(id));
}

Expr Context::extract_logs(const Expr& e) {
  auto rebuild = [this](const Poly& p) {
    Expr sum = zero_;
    for (const auto& t : p) {
      Monomial plain = t.mono;
      plain.exp = nullptr;
      Expr term = from_poly(Poly{Term{std::move(plain), t.coef}});
      if (t.mono.exp) term = term * exp(wrap(t.mono.exp));
      sum = sum + term;
    }
    return sum;
  };
  return rebuild(e.num()) / rebuild(e.den());
}

Expr Context::make(Poly num, Poly den) {
  if (den.empty()) throw Error(ErrorKind::DivisionByZero, "division by zero");
  if (num.empty()) return zero_;
  return normalize(std::move(num), std::move(den));
}

// Chooses the denominator term whose coefficient and exp factor are divided
// out: the largest atom part, preferring a term without exp factor.
static std::size_t unit_term(const Poly& den) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < den.size(); ++i) {
    if (den[i].mono.powers != den[0].mono.powers) break;
    if (!den[i].mono.exp) best = i;
  }
  if (den[best].mono.exp && !den[0].mono.exp) best = 0;
  return best;
}

Expr Context::normalize(Poly num, Poly den) {
  if (detail::is_one(den)) {
    const Node* n = intern(std::move(num), std::move(den));
    if (has_pending_log(n)) return extract_logs(Expr(this, n));
    return Expr(this, n);
  }
  if (den.size() == 1) {
    // monomial denominator: cancel common atom powers directly
    Monomial& dm = den[0].mono;
    std::vector<std::pair<Atom, int>> common;
    for (auto [a, e] : dm.powers) {
      int m = e;
      for (const auto& t : num) {
        int have = 0;
        for (auto [b, f] : t.mono.powers)
          if (b == a) have = f;
        m = std::min(m, have);
        if (m == 0) break;
      }
      if (m > 0) common.emplace_back(a, m);
    }
    auto strip = [&common](Monomial& mono) {
      for (auto [a, e] : common) {
        for (auto it = mono.powers.begin(); it != mono.powers.end(); ++it) {
          if (it->first == a) {
            it->second -= e;
            if (it->second == 0) mono.powers.erase(it);
            break;
          }
        }
      }
    };
    if (!common.empty()) {
      for (auto& t : num) strip(t.mono);
      strip(dm);
      detail::canonical_order(num);
    }
  } else {
    detail::cancel_common_factor(*this, num, den);
  }
  std::size_t u = unit_term(den);
  Rational c = den[u].coef;
  if (den[u].mono.exp) {
    Monomial inv;
    inv.exp = (-wrap(den[u].mono.exp)).node();
    Rational ic = 1 / c;
    num = detail::times_monomial(*this, num, inv, ic);
    den = detail::times_monomial(*this, den, inv, ic);
  } else if (c != 1) {
    num = detail::scale(num, 1 / c);
    den = detail::scale(den, 1 / c);
  }
  const Node* n = intern(std::move(num), std::move(den));
  if (has_pending_log(n)) return extract_logs(Expr(this, n));
  return Expr(this, n);
}

// ---------------------------------------------------------------- expr ops

bool Expr::is_polynomial() const { return detail::is_one(node_->den); }

std::optional<Rational> Expr::constant_value() const {
  if (node_->num.empty()) return Rational(0);
  if (!detail::is_constant(node_->num) || !detail::is_constant(node_->den)) return std::nullopt;
  return node_->num[0].coef / node_->den[0].coef;
}

bool Expr::equals(const Expr& o) const { return node_ == o.node_ || (*this - o).is_zero(); }

Expr Expr::operator-() const { return ctx_->make(detail::neg(num()), den()); }

Expr Expr::pow(int n) const {
  if (n == 0) return ctx_->one();
  if (n < 0) return ctx_->one() / pow(-n);
  Expr result = ctx_->one();
  Expr base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

Expr operator+(const Expr& a, const Expr& b) {
  Context& c = a.context();
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den() == b.den()) return c.make(detail::add(a.num(), b.num()), a.den());
  Poly num = detail::add(detail::mul(c, a.num(), b.den()), detail::mul(c, b.num(), a.den()));
  return c.make(std::move(num), detail::mul(c, a.den(), b.den()));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  Context& c = a.context();
  if (a.is_zero() || b.is_zero()) return c.zero();
  if (a.is_polynomial() && b.is_polynomial()) return c.make(detail::mul(c, a.num(), b.num()), Context::unit_poly());
  return c.make(detail::mul(c, a.num(), b.num()), detail::mul(c, a.den(), b.den()));
}

Expr operator/(const Expr& a, const Expr& b) {
  Context& c = a.context();
  if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by an expression that is zero");
  return c.make(detail::mul(c, a.num(), b.den()), detail::mul(c, a.den(), b.num()));
}

Expr operator+(const Expr& a, long b) { return a + a.context().integer(b); }
Expr operator-(const Expr& a, long b) { return a - a.context().integer(b); }
Expr operator*(const Expr& a, long b) { return a * Rational(b); }
Expr operator/(const Expr& a, long b) { return a / a.context().integer(b); }
Expr operator*(const Expr& a, const Rational& b) {
  if (b == 0) return a.context().zero();
  return a.context().make(detail::scale(a.num(), b), a.den());
}

}  // namespace potsym
