#include "potsym/transform.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace potsym {

// Derivatives in the image variables of a coordinate map, written on the
// domain jet space:
//   D~_t = (D_x x~ D_t - D_t x~ D_x) / J,   D~_x = (D_t t~ D_x - D_x t~ D_t) / J.
struct PointTransformation::Side {
  Expr dt_t, dx_t, dt_x, dx_x, jac;
  struct Family {
    Expr base;
    std::map<DerivIndex, Expr> values;
  };
  std::map<std::pair<AtomKind, int>, Family> families;

  Side(const Expr& tt, const Expr& xx) {
    dt_t = total_derivative(tt, Direction::T);
    dx_t = total_derivative(tt, Direction::X);
    dt_x = total_derivative(xx, Direction::T);
    dx_x = total_derivative(xx, Direction::X);
    jac = dt_t * dx_x - dx_t * dt_x;
  }

  Expr image_derivative(const Expr& f, Direction d) const {
    Expr ft = total_derivative(f, Direction::T), fx = total_derivative(f, Direction::X);
    if (d == Direction::T) return (dx_x * ft - dt_x * fx) / jac;
    return (dt_t * fx - dx_t * ft) / jac;
  }

  // D~^k applied to the family's base value.
  const Expr& value(AtomKind kind, int owner, const Expr& base, DerivIndex k) {
    Family& f = families.try_emplace({kind, owner}, Family{base, {}}).first->second;
    if (f.values.empty()) f.values.emplace(DerivIndex{}, f.base);
    return value(f, k);
  }

  const Expr& value(Family& f, DerivIndex k) {
    auto it = f.values.find(k);
    if (it != f.values.end()) return it->second;
    Direction d = k.kx > 0 ? Direction::X : Direction::T;
    Expr v = image_derivative(value(f, k.shifted(d, -1)), d);
    return f.values.emplace(k, v).first->second;
  }
};

namespace {

void collect_logs(const Expr& e, std::set<const Node*>& seen, std::vector<std::string>& out) {
  if (!seen.insert(e.node()).second) return;
  for (Atom a : atoms_of(e))
    if (a.kind() == AtomKind::Log) {
      std::string note = e.context().log_argument(a).str() + " > 0";
      if (std::find(out.begin(), out.end(), note) == out.end()) out.push_back(note);
    }
}

bool depends_on_jets(const Expr& e) {
  for (Atom a : atoms_of(e))
    if (a.kind() == AtomKind::Jet) return true;
  return false;
}

}  // namespace

std::vector<int> PointTransformation::dependents() const {
  std::vector<int> out;
  for (const auto& [d, e] : fwd_.u) out.push_back(d);
  return out;
}

PointTransformation PointTransformation::create(Context& ctx, std::string name, CoordinateMap forward,
                                                CoordinateMap inverse, std::uint64_t seed) {
  PointTransformation g;
  g.ctx_ = &ctx;
  g.name_ = std::move(name);
  if (!forward.t.valid()) forward.t = ctx.t();
  if (!forward.x.valid()) forward.x = ctx.x();
  if (!inverse.t.valid()) inverse.t = ctx.t();
  if (!inverse.x.valid()) inverse.x = ctx.x();
  // a dependent that occurs in the maps but is not transformed is kept fixed
  std::set<int> mentioned;
  for (const CoordinateMap* m : {&forward, &inverse}) {
    std::vector<Expr> all{m->t, m->x};
    for (const auto& [d, e] : m->u) all.push_back(e);
    for (const Expr& e : all)
      for (Atom a : atoms_of(e))
        if (a.kind() == AtomKind::Jet) mentioned.insert(a.owner());
  }
  for (int d : mentioned)
    if (!forward.u.count(d) && !inverse.u.count(d)) {
      forward.u[d] = ctx.jet(d);
      inverse.u[d] = ctx.jet(d);
    }
  for (const auto& [d, e] : forward.u)
    if (!inverse.u.count(d))
      throw Error(ErrorKind::BadInverse, g.name_ + ": inverse gives no value for " + ctx.dependent_name(d));
  for (const auto& [d, e] : inverse.u)
    if (!forward.u.count(d))
      throw Error(ErrorKind::BadInverse, g.name_ + ": inverse maps " + ctx.dependent_name(d) + ", which is not transformed");
  auto check_point = [&](const CoordinateMap& m) {
    for (const Expr* e : {&m.t, &m.x})
      for (Atom a : atoms_of(*e))
        if (a.kind() == AtomKind::Jet && a.index().order() > 0)
          throw Error(ErrorKind::InvalidArgument, g.name_ + " is not a point transformation");
    for (const auto& [d, e] : m.u)
      for (Atom a : atoms_of(e))
        if (a.kind() == AtomKind::Jet && a.index().order() > 0)
          throw Error(ErrorKind::InvalidArgument, g.name_ + " is not a point transformation of its dependents");
  };
  check_point(forward);
  check_point(inverse);
  g.fwd_ = std::move(forward);
  g.inv_ = std::move(inverse);
  g.to_target_ = std::make_shared<Side>(g.fwd_.t, g.fwd_.x);
  g.to_source_ = std::make_shared<Side>(g.inv_.t, g.inv_.x);
  g.jacobian_ = g.to_target_->jac;
  if (g.jacobian_.is_zero()) throw Error(ErrorKind::SingularJacobian, g.name_ + " has vanishing Jacobian");
  if (g.to_source_->jac.is_zero()) throw Error(ErrorKind::SingularJacobian, "inverse of " + g.name_ + " has vanishing Jacobian");
  g.pushed_ = std::make_shared<std::map<int, int>>();
  g.pulled_ = std::make_shared<std::map<int, int>>();

  std::set<const Node*> seen;
  collect_logs(g.inv_.t, seen, g.notes_);
  collect_logs(g.inv_.x, seen, g.notes_);
  for (const auto& [d, e] : g.inv_.u) collect_logs(e, seen, g.notes_);
  seen.clear();
  collect_logs(g.fwd_.t, seen, g.notes_);
  collect_logs(g.fwd_.x, seen, g.notes_);
  for (const auto& [d, e] : g.fwd_.u) collect_logs(e, seen, g.notes_);

  // g^{-1}(g(p)) = p at random points of the source
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.2, 1.2);
  Atom at = Atom::independent(Direction::T), ax = Atom::independent(Direction::X);
  int good = 0;
  for (int attempt = 0; attempt < 300 && good < 30; ++attempt) {
    std::map<Atom, double> p{{at, dist(rng)}, {ax, dist(rng)}};
    for (const auto& [d, e] : g.fwd_.u) p[Atom::jet(d, {})] = dist(rng);
    std::map<Atom, double> image, back;
    try {
      image[at] = evaluate_numeric(g.fwd_.t, p);
      image[ax] = evaluate_numeric(g.fwd_.x, p);
      for (const auto& [d, e] : g.fwd_.u) image[Atom::jet(d, {})] = evaluate_numeric(e, p);
      back[at] = evaluate_numeric(g.inv_.t, image);
      back[ax] = evaluate_numeric(g.inv_.x, image);
      for (const auto& [d, e] : g.inv_.u) back[Atom::jet(d, {})] = evaluate_numeric(e, image);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NumericSingularity) continue;
      throw;
    }
    for (const auto& [a, v] : p)
      if (std::fabs(back[a] - v) > 1e-9 * std::max(1.0, std::fabs(v)))
        throw Error(ErrorKind::BadInverse, "inverse of " + g.name_ + " does not undo the forward map for " + ctx.atom_name(a));
    ++good;
  }
  if (good < 30) throw Error(ErrorKind::BadInverse, "could not sample the domain of " + g.name_);

  for (int d : g.dependents())
    for (int n = 0; n <= 3; ++n)
      for (int kt = 0; kt <= n; ++kt) {
        g.to_target_->value(AtomKind::Jet, d, g.fwd_.u.at(d), {kt, n - kt});
        g.to_source_->value(AtomKind::Jet, d, g.inv_.u.at(d), {kt, n - kt});
      }
  return g;
}

Expr PointTransformation::prolonged(int dependent, DerivIndex k) const {
  return to_target_->value(AtomKind::Jet, dependent, image_base(dependent, true), k);
}

// Parameter functions are carried along as functions of the new independent
// variables: alpha(t, x) = alphaG(t~, x~) under push_forward, and the pulled-back
// image of a target function gets the suffix "inv".
AtomMap PointTransformation::map_params(const Expr& e, ParamTable& params, bool forward) const {
  Context& ctx = *ctx_;
  const CoordinateMap& m = forward ? fwd_ : inv_;
  Side& express = forward ? *to_source_ : *to_target_;  // derivatives of the original, on the image side
  Side& image_side = forward ? *to_target_ : *to_source_;
  auto& cache = forward ? *pushed_ : *pulled_;
  auto& back_cache = forward ? *pulled_ : *pushed_;

  AtomMap b;
  for (Atom a : atoms_of(e)) {
    if (a.kind() != AtomKind::Param) continue;
    int id = a.owner();
    auto hit = cache.find(id);
    if (hit == cache.end()) {
      if (depends_on_jets(m.t) || depends_on_jets(m.x))
        throw Error(ErrorKind::InvalidArgument,
                    "parameter functions cannot be carried through " + name_ + ", whose independent variables depend on u");
      std::string base = ctx.param_name(id);
      std::string img_name = forward ? base + name_ : base + name_ + "inv";
      auto existing = ctx.find_param_function(img_name);
      int img = ctx.param_function(img_name);
      cache[id] = img;
      back_cache[img] = id;
      hit = cache.find(id);

      auto src = params.find(id);
      ParamFunction derived{img_name, img, std::nullopt, ctx.zero()};
      if (src != params.end() && src->second.lead) {
        const ParamFunction& p = src->second;
        Expr raw = image_side.value(AtomKind::Param, id, ctx.param(id), *p.lead);
        PDESystem own = PDESystem::create(ctx, p.name, {}, {}, {p});
        Expr rhs = forward ? push_forward(own.reduce(raw), params) : pull_back(own.reduce(raw), params);
        for (Atom c : atoms_of(rhs))
          if (c.kind() == AtomKind::Param && (c.owner() != img || c.index().kt >= p.lead->kt))
            throw Error(ErrorKind::InvalidArgument, "constraint of " + p.name + " does not carry over through " + name_);
        derived.lead = p.lead;
        derived.rhs = rhs;
      }
      auto known = params.find(img);
      if (existing && known != params.end()) {
        const ParamFunction& k = known->second;
        bool same = k.lead == derived.lead && (!k.lead || k.rhs.equals(derived.rhs));
        if (!same)
          throw Error(ErrorKind::NameCollision,
                      img_name + " is declared with a constraint that differs from the image of " + base + " under " + name_);
      } else {
        params[img] = derived;
      }
    }
  }
  for (Atom a : atoms_of(e)) {
    if (a.kind() != AtomKind::Param) continue;
    int img = cache.at(a.owner());
    b.emplace(a, express.value(AtomKind::Param, img, ctx.param(img), a.index()));
  }
  return b;
}

Expr PointTransformation::image_base(int dependent, bool forward) const {
  const CoordinateMap& m = forward ? fwd_ : inv_;
  auto it = m.u.find(dependent);
  return it == m.u.end() ? ctx_->jet(dependent) : it->second;
}

// Coordinates and parameter functions are replaced simultaneously: the
// parameter images are already written in the other variables.
Expr PointTransformation::pull_back(const Expr& e, ParamTable& params) const {
  AtomMap all = map_params(e, params, false);
  for (Atom a : atoms_of(e)) {
    if (a.kind() == AtomKind::Independent) all.emplace(a, a.owner() == 0 ? fwd_.t : fwd_.x);
    else if (a.kind() == AtomKind::Jet) all.emplace(a, prolonged(a.owner(), a.index()));
  }
  return all.empty() ? e : substitute(e, all);
}

Expr PointTransformation::push_forward(const Expr& e, ParamTable& params) const {
  AtomMap all = map_params(e, params, true);
  for (Atom a : atoms_of(e)) {
    if (a.kind() == AtomKind::Independent) all.emplace(a, a.owner() == 0 ? inv_.t : inv_.x);
    else if (a.kind() == AtomKind::Jet)
      all.emplace(a, to_source_->value(AtomKind::Jet, a.owner(), image_base(a.owner(), false), a.index()));
  }
  return all.empty() ? e : substitute(e, all);
}

PointTransformation PointTransformation::inverted() const {
  return create(*ctx_, name_ + "inv", inv_, fwd_);
}

PointTransformation PointTransformation::extended(const std::vector<int>& potentials) const {
  CoordinateMap f = fwd_, i = inv_;
  for (int v : potentials) {
    if (f.u.count(v))
      throw Error(ErrorKind::NameCollision, ctx_->dependent_name(v) + " is already transformed by " + name_);
    f.u[v] = ctx_->jet(v);
    i.u[v] = ctx_->jet(v);
  }
  return create(*ctx_, name_ + "pr", f, i);
}

PointTransformation prolong_to_potential(const PointTransformation& g, const std::vector<int>& potentials) {
  return g.extended(potentials);
}

Multiplier compute_multiplier(const PointTransformation& g, const PDESystem& source, const PDESystem& target,
                              ParamTable& params) {
  Context& ctx = g.context();
  Multiplier lambda;
  for (std::size_t mu = 0; mu < target.equations().size(); ++mu) {
    Expr e = g.pull_back(target.operator_expr(mu), params);
    PDESystem src = source.with_params(params_in({e}, params));
    Expr r = src.reduce_with_slacks(e);
    std::vector<Atom> slacks;
    AtomMap drop;
    for (Atom a : atoms_of(r))
      if (src.slack_equation(a)) {
        slacks.push_back(a);
        drop.emplace(a, ctx.zero());
      }
    Expr rest = src.reduce(substitute(r, drop));
    if (!rest.is_zero())
      throw Error(ErrorKind::MapMismatch, g.name() + " does not map " + source.name() + " to " + target.name() +
                                              ": equation " + std::to_string(mu + 1) + " leaves " + rest.str());
    std::vector<Expr> row(src.equations().size(), ctx.zero());
    for (Atom s : slacks) {
      Expr c = partial_derivative(r, s);
      for (Atom a : atoms_of(c))
        if (src.slack_equation(a))
          throw Error(ErrorKind::MapMismatch, "image of equation " + std::to_string(mu + 1) + " is not linear in " + source.name());
      if (s.index().order() > 0)
        throw Error(ErrorKind::MapMismatch, "image of equation " + std::to_string(mu + 1) +
                                                " involves derivatives of the equations of " + source.name());
      row[*src.slack_equation(s)] = c;
    }
    lambda.push_back(std::move(row));
  }
  return lambda;
}

ConservedVector transform_conserved_vector(const ConservedVector& cv, const PointTransformation& g,
                                           const PDESystem& source, const PDESystem& target, ParamTable& params) {
  compute_multiplier(g, source, target, params);
  PDESystem src = source.with_params(params_in({cv.T, cv.X}, params));
  const Expr& tt = g.forward().t;
  const Expr& xx = g.forward().x;
  const Expr& j = g.jacobian();
  Expr tg = (cv.T * total_derivative(tt, Direction::T) + cv.X * total_derivative(tt, Direction::X)) / j;
  Expr xg = (cv.T * total_derivative(xx, Direction::T) + cv.X * total_derivative(xx, Direction::X)) / j;
  Expr T = g.push_forward(src.reduce(tg), params);
  Expr X = g.push_forward(src.reduce(xg), params);
  PDESystem tgt = target.with_params(params_in({T, X}, params));
  return ConservedVector::make(tgt.reduce(T), tgt.reduce(X));
}

Characteristic transform_characteristic(const Characteristic& target_char, const PointTransformation& g,
                                        const Multiplier& lambda, const PDESystem& source, ParamTable& params) {
  Context& ctx = g.context();
  std::size_t l = source.equations().size();
  if (lambda.size() != target_char.components.size())
    throw Error(ErrorKind::InvalidArgument, "characteristic and multiplier sizes differ");
  std::vector<Expr> pulled;
  for (const Expr& c : target_char.components) pulled.push_back(g.pull_back(c, params) * g.jacobian());
  std::vector<Expr> out(l, ctx.zero());
  for (std::size_t mu = 0; mu < l; ++mu)
    for (std::size_t nu = 0; nu < lambda.size(); ++nu) out[mu] = out[mu] + lambda[nu].at(mu) * pulled[nu];
  PDESystem src = source.with_params(params_in(out, params));
  for (Expr& e : out) e = src.reduce(e);
  return Characteristic{std::move(out)};
}

VectorField push_forward_vector_field(const VectorField& q, const PointTransformation& g, ParamTable& params) {
  Context& ctx = g.context();
  std::map<int, Expr> images = g.forward().u;
  for (const auto& [d, e] : q.eta) images.try_emplace(d, ctx.jet(d));
  auto apply = [&](const Expr& y) {
    Expr r = q.tau * explicit_derivative(y, Direction::T) + q.xi * explicit_derivative(y, Direction::X);
    for (const auto& [d, e] : q.eta) r = r + e * partial_derivative(y, Atom::jet(d, {}));
    return g.push_forward(r, params);
  };
  VectorField out{apply(g.forward().t), apply(g.forward().x), {}};
  for (const auto& [d, y] : images)
    if (Expr c = apply(y); !c.is_zero()) out.eta[d] = c;
  return out;
}

}  // namespace potsym
