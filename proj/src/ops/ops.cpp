#include "potsym/ops.hpp"

#include <chrono>
#include <functional>
#include <sstream>

namespace potsym {

using nlohmann::json;

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Verified: return "verified";
    case Status::Failed: return "failed";
    case Status::Error: return "error";
  }
  return "error";
}

json Report::to_json() const {
  json j;
  j["status"] = std::string(to_string(status));
  j["operation"] = operation;
  j["residuals"] = json::array();
  for (const Expr& r : residuals) j["residuals"].push_back(r.str());
  j["result"] = result;
  if (error) {
    json e{{"kind", std::string(potsym::to_string(error->kind()))}, {"message", error->what()}};
    if (error->location()) {
      e["line"] = error->location()->line;
      e["column"] = error->location()->column;
    }
    j["error"] = e;
  } else {
    j["error"] = nullptr;
  }
  j["timing_ms"] = millis;
  return j;
}

namespace {

void text_of(const json& v, const std::string& indent, std::ostringstream& out) {
  for (const auto& [k, x] : v.items()) {
    out << indent << k << ":";
    if (x.is_string()) out << " " << x.get<std::string>() << "\n";
    else if (x.is_array() && std::all_of(x.begin(), x.end(), [](const json& e) { return e.is_string(); })) {
      out << "\n";
      for (const auto& e : x) out << indent << "  " << e.get<std::string>() << "\n";
    } else if (x.is_object()) {
      out << "\n";
      text_of(x, indent + "  ", out);
    } else {
      out << " " << x.dump() << "\n";
    }
  }
}

}  // namespace

std::string Report::to_text() const {
  std::ostringstream out;
  out << operation << ": " << to_string(status) << "\n";
  if (error) out << "  " << error->describe() << "\n";
  text_of(result, "  ", out);
  if (!residuals.empty()) {
    out << "  residuals:\n";
    for (const Expr& r : residuals) out << "    " << r.str() << "\n";
  }
  return out.str();
}

int Report::exit_code() const {
  switch (status) {
    case Status::Verified: return 0;
    case Status::Failed: return 1;
    case Status::Error: return 2;
  }
  return 2;
}

namespace {

// ---------------------------------------------------------------- helpers

struct Call {
  Document& doc;
  const Args& args;
  Report& rep;

  Context& ctx() { return doc.context(); }

  const std::string& need(const std::string& key) const {
    auto it = args.find(key);
    if (it == args.end() || it->second.empty())
      throw Error(ErrorKind::InvalidArgument, "missing argument " + key);
    return it->second;
  }
  std::optional<std::string> opt(const std::string& key) const {
    auto it = args.find(key);
    if (it == args.end() || it->second.empty()) return std::nullopt;
    return it->second;
  }

  PDESystem attach(const PDESystem& sys, const std::vector<Expr>& exprs) const {
    return sys.with_params(params_in(exprs, doc.params));
  }

  const NamedCV& named_cv(const std::string& key) const { return doc.cv(need(key)); }

  // system argument, defaulting to the cv's declared one
  const PDESystem& system_for(const std::string& key, const NamedCV* cv) const {
    if (auto s = opt(key)) return doc.system(*s);
    if (cv && cv->system) return doc.system(*cv->system);
    throw Error(ErrorKind::InvalidArgument, "missing argument " + key);
  }

  Expr expr(const std::string& key) const { return parse_expr(need(key), doc); }

  VectorField field(const std::string& key) const {
    const std::string& v = need(key);
    if (std::find(doc.field_names().begin(), doc.field_names().end(), v) != doc.field_names().end())
      return doc.field(v).field;
    return parse_vector_field(v, doc);
  }

  std::vector<VectorField> fields(const std::string& key) const {
    std::vector<VectorField> out;
    std::stringstream ss(need(key));
    std::string name;
    while (std::getline(ss, name, ','))
      if (!name.empty()) out.push_back(doc.field(name).field);
    return out;
  }

  std::vector<int> dependents(const std::string& key) const {
    std::vector<int> out;
    std::stringstream ss(need(key));
    std::string name;
    while (std::getline(ss, name, ',')) {
      auto id = doc.context().find_dependent(name);
      if (!id || !doc.has_dependent(name)) throw Error(ErrorKind::UnknownSymbol, "unknown dependent variable " + name);
      out.push_back(*id);
    }
    return out;
  }

  int dependent(const std::string& key, const std::string& fallback) const {
    std::string name = opt(key).value_or(fallback);
    auto id = doc.context().find_dependent(name);
    if (!id || !doc.has_dependent(name)) throw Error(ErrorKind::UnknownSymbol, "unknown dependent variable " + name);
    return *id;
  }

  // A declared transformation; NAMEinv names the inverse.  With potentials=...
  // the transformation is prolonged to them.
  PointTransformation transform() const {
    const std::string& name = need("transform");
    PointTransformation g;
    auto names = doc.transform_names();
    if (std::find(names.begin(), names.end(), name) != names.end()) {
      g = doc.transform(name);
    } else if (name.size() > 3 && name.ends_with("inv")) {
      g = doc.transform(name.substr(0, name.size() - 3)).inverted();
    } else {
      doc.transform(name);  // throws UnknownSymbol
    }
    if (opt("potentials")) g = prolong_to_potential(g, dependents("potentials"));
    return g;
  }

  // "e1; e2; ..."
  std::vector<Expr> expr_list(const std::string& key) const {
    std::vector<Expr> out;
    std::stringstream ss(need(key));
    std::string part;
    while (std::getline(ss, part, ';')) out.push_back(parse_expr(part, doc));
    return out;
  }

  void values(std::vector<Expr> v, const std::string& label) {
    json arr = json::array();
    for (const Expr& e : v) arr.push_back(e.str());
    rep.result[label] = arr;
    rep.values = std::move(v);
  }

  void verdict(const Verdict& v) {
    rep.residuals = v.residuals;
    rep.status = v.holds ? Status::Verified : Status::Failed;
  }

  void set_field(const VectorField& q, const std::string& label = "field") {
    rep.field = q;
    rep.result[label] = q.str();
  }
};

json rules_json(const PDESystem& sys) {
  json arr = json::array();
  Context& ctx = sys.context();
  for (const Rule& r : sys.equations()) arr.push_back(ctx.atom_name(r.lead) + " = " + r.rhs.str());
  return arr;
}

bool same_rules(const PDESystem& a, const PDESystem& b) {
  if (a.equations().size() != b.equations().size()) return false;
  for (const Rule& r : a.equations()) {
    const Rule* o = b.rule_for(r.lead);
    if (!o || !(o->lead == r.lead) || !o->rhs.equals(r.rhs)) return false;
  }
  return true;
}

std::vector<Expr> all_exprs(const VectorField& q) {
  std::vector<Expr> out{q.tau, q.xi};
  for (const auto& [d, e] : q.eta) out.push_back(e);
  return out;
}

// ---------------------------------------------------------------- operations

using OpFn = std::function<void(Call&)>;

void op_reduce(Call& c) {
  Expr e = c.expr("expr");
  PDESystem sys = c.attach(c.doc.system(c.need("system")), {e});
  c.values({sys.reduce(e)}, "reduced");
  c.rep.status = Status::Verified;
}

void op_verify_cl(Call& c) {
  const NamedCV& cv = c.named_cv("cv");
  PDESystem sys = c.attach(c.system_for("system", &cv), {cv.cv.T, cv.cv.X});
  c.verdict(verify_conservation_law(cv.cv, sys));
  c.rep.result["order"] = cv.cv.order;
}

void op_char(Call& c) {
  const NamedCV& cv = c.named_cv("cv");
  PDESystem sys = c.attach(c.system_for("system", &cv), {cv.cv.T, cv.cv.X});
  c.values(extract_characteristic(cv.cv, sys).components, "characteristic");
  c.rep.status = Status::Verified;
}

void op_trivial(Call& c) {
  const NamedCV& cv = c.named_cv("cv");
  PDESystem sys = c.attach(c.system_for("system", &cv), {cv.cv.T, cv.cv.X});
  Characteristic ch = extract_characteristic(cv.cv, sys);
  c.values(ch.components, "characteristic");
  bool trivial = std::all_of(ch.components.begin(), ch.components.end(), [](const Expr& e) { return e.is_zero(); });
  c.rep.result["trivial"] = trivial;
  c.rep.status = trivial ? Status::Verified : Status::Failed;
}

void op_equiv(Call& c) {
  const NamedCV& a = c.named_cv("a");
  const NamedCV& b = c.named_cv("b");
  PDESystem sys = c.attach(c.system_for("system", &a), {a.cv.T, a.cv.X, b.cv.T, b.cv.X});
  Characteristic ch = extract_characteristic(a.cv - b.cv, sys);
  c.values(ch.components, "difference_characteristic");
  bool eq = std::all_of(ch.components.begin(), ch.components.end(), [](const Expr& e) { return e.is_zero(); });
  c.rep.result["equivalent"] = eq;
  c.rep.status = eq ? Status::Verified : Status::Failed;
}

void op_potsys(Call& c) {
  const NamedCV& cv = c.named_cv("cv");
  PDESystem sys = c.attach(c.system_for("system", &cv), {cv.cv.T, cv.cv.X});
  std::string potential = c.opt("potential").value_or("v");
  std::string name = c.opt("save").value_or(sys.name() + "_" + potential);
  PDESystem p = build_potential_system(cv.cv, sys, potential, name);
  if (!c.doc.has_dependent(potential)) c.doc.declare_dependent(potential);
  std::vector<Expr> rhs;
  for (const Rule& r : p.equations()) rhs.push_back(r.rhs);
  c.values(rhs, "rhs");
  c.rep.result["system"] = rules_json(p);
  c.rep.status = Status::Verified;
  if (auto expect = c.opt("expect")) {
    bool same = same_rules(p, c.doc.system(*expect));
    c.rep.result["matches"] = same;
    if (!same) c.rep.status = Status::Failed;
  }
  if (c.opt("save")) c.doc.add_system(std::move(p));
}

void op_poteq(Call& c) {
  const PDESystem& p = c.doc.system(c.need("system"));
  std::string name = c.opt("save").value_or(p.name() + "_eq");
  PDESystem eq = potential_equation(p, name);
  c.values({eq.equations()[0].rhs}, "rhs");
  c.rep.result["system"] = rules_json(eq);
  c.rep.status = Status::Verified;
  if (c.opt("save")) c.doc.add_system(std::move(eq));
}

void op_jacobian(Call& c) {
  PointTransformation g = c.transform();
  c.values({g.jacobian()}, "jacobian");
  json notes = json::array();
  for (const auto& n : g.domain_notes()) notes.push_back(n);
  c.rep.result["domain"] = notes;
  c.rep.status = Status::Verified;
}

void op_prolong(Call& c) {
  PointTransformation g = c.transform();
  Expr j = c.expr("jet");
  auto atoms = atoms_of(j);
  if (atoms.size() != 1 || atoms.begin()->kind() != AtomKind::Jet || !j.equals(c.ctx().atom(*atoms.begin())))
    throw Error(ErrorKind::InvalidArgument, "jet must be a single jet coordinate such as u_x");
  Atom a = *atoms.begin();
  c.values({g.prolonged(a.owner(), a.index())}, "image");
  c.rep.status = Status::Verified;
}

void op_prolong_vf(Call& c) {
  VectorField q = c.field("field");
  Expr j = c.expr("jet");
  auto atoms = atoms_of(j);
  if (atoms.size() != 1 || atoms.begin()->kind() != AtomKind::Jet)
    throw Error(ErrorKind::InvalidArgument, "jet must be a single jet coordinate such as u_x");
  Atom a = *atoms.begin();
  std::vector<int> deps{a.owner()};
  for (const auto& [d, e] : q.eta) deps.push_back(d);
  auto table = prolong_vector_field(q, deps, a.index().order());
  c.values({table.at(a)}, "coefficient");
  c.rep.status = Status::Verified;
}

void op_map_cv(Call& c) {
  PointTransformation g = c.transform();
  const NamedCV& cv = c.named_cv("cv");
  const PDESystem& src = c.system_for("source", &cv);
  const PDESystem& tgt = c.doc.system(c.need("target"));
  PDESystem s = c.attach(src, {cv.cv.T, cv.cv.X});
  ConservedVector out = transform_conserved_vector(cv.cv, g, s, tgt, c.doc.params);
  c.values({out.T, out.X}, "conserved_vector");
  PDESystem t = c.attach(tgt, {out.T, out.X});
  c.verdict(verify_conservation_law(out, t));
  if (auto save = c.opt("save")) c.doc.add_cv(NamedCV{*save, out, tgt.name(), cv.where});
}

void op_multiplier(Call& c) {
  PointTransformation g = c.transform();
  const PDESystem& src = c.doc.system(c.need("source"));
  const PDESystem& tgt = c.doc.system(c.need("target"));
  Multiplier m = compute_multiplier(g, src, tgt, c.doc.params);
  std::vector<Expr> flat;
  json rows = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const Expr& e : row) {
      flat.push_back(e);
      r.push_back(e.str());
    }
    rows.push_back(r);
  }
  c.rep.values = flat;
  c.rep.result["multiplier"] = rows;
  c.rep.result["jacobian"] = g.jacobian().str();
  c.rep.status = Status::Verified;
}

void op_map_char(Call& c) {
  PointTransformation g = c.transform();
  const PDESystem& src = c.doc.system(c.need("source"));
  const PDESystem& tgt = c.doc.system(c.need("target"));
  Characteristic target_char;
  if (c.opt("char")) {
    target_char.components = c.expr_list("char");
  } else {
    const NamedCV& cv = c.named_cv("cv");
    target_char = extract_characteristic(cv.cv, c.attach(tgt, {cv.cv.T, cv.cv.X}));
  }
  Multiplier m = compute_multiplier(g, src, tgt, c.doc.params);
  c.values(transform_characteristic(target_char, g, m, src, c.doc.params).components, "characteristic");
  c.rep.status = Status::Verified;
}

void op_pushforward(Call& c) {
  PointTransformation g = c.transform();
  VectorField q = push_forward_vector_field(c.field("field"), g, c.doc.params);
  c.set_field(q);
  c.rep.status = Status::Verified;
  if (c.opt("span")) {
    auto coords = span_coordinates(q, c.fields("span"));
    c.rep.result["in_span"] = coords.has_value();
    if (coords) {
      json arr = json::array();
      for (const auto& r : *coords) arr.push_back(r.get_str());
      c.rep.result["coordinates"] = arr;
    } else {
      c.rep.status = Status::Failed;
    }
  }
  if (c.opt("system")) {
    PDESystem sys = c.attach(c.doc.system(c.need("system")), all_exprs(q));
    Verdict v = verify_lie_symmetry(q, sys);
    c.rep.residuals = v.residuals;
    if (!v.holds) c.rep.status = Status::Failed;
  }
}

void op_verify_sym(Call& c) {
  std::vector<VectorField> qs = c.opt("fields") ? c.fields("fields") : std::vector<VectorField>{c.field("field")};
  const PDESystem& base = c.doc.system(c.need("system"));
  bool all = true;
  json per = json::array();
  for (const auto& q : qs) {
    Verdict v = verify_lie_symmetry(q, c.attach(base, all_exprs(q)));
    all = all && v.holds;
    per.push_back(v.holds);
    c.rep.residuals.insert(c.rep.residuals.end(), v.residuals.begin(), v.residuals.end());
  }
  c.rep.result["symmetries"] = per;
  c.rep.result["verified_count"] = std::count(per.begin(), per.end(), true);
  c.rep.status = all ? Status::Verified : Status::Failed;
}

void op_act(Call& c) {
  VectorField q = c.field("field");
  const NamedCV& cv = c.named_cv("cv");
  std::vector<Expr> ex = all_exprs(q);
  ex.push_back(cv.cv.T);
  ex.push_back(cv.cv.X);
  PDESystem sys = c.attach(c.system_for("system", &cv), ex);
  ConservedVector out = symmetry_action_on_cv(q, cv.cv, sys);
  c.values({out.T, out.X}, "conserved_vector");
  c.verdict(verify_conservation_law(out, c.attach(sys, {out.T, out.X})));
}

void op_invariant_cl(Call& c) {
  VectorField q = c.field("field");
  const NamedCV& cv = c.named_cv("cv");
  std::vector<Expr> ex = all_exprs(q);
  ex.push_back(cv.cv.T);
  ex.push_back(cv.cv.X);
  PDESystem sys = c.attach(c.system_for("system", &cv), ex);
  ConservedVector out = symmetry_action_on_cv(q, cv.cv, sys);
  c.values({out.T, out.X}, "action");
  bool inv = out.T.is_zero() && out.X.is_zero();
  c.rep.result["invariant"] = inv;
  c.rep.status = inv ? Status::Verified : Status::Failed;
}

void op_commutator(Call& c) {
  c.set_field(commutator(c.field("a"), c.field("b")));
  c.rep.status = Status::Verified;
}

void op_closure(Call& c) {
  std::vector<VectorField> basis = c.fields("fields");
  if (!linearly_independent(basis)) throw Error(ErrorKind::InvalidArgument, "basis is not linearly independent");
  Closure cl = verify_span_closure(basis);
  c.rep.result["closed"] = cl.closed;
  std::size_t n = basis.size();
  if (cl.closed) {
    json consts = json::object();
    int brackets = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        ++brackets;
        json row = json::array();
        for (std::size_t k = 0; k < n; ++k) row.push_back(cl.constants[i][j][k].get_str());
        consts[std::to_string(i + 1) + "," + std::to_string(j + 1)] = row;
      }
    c.rep.result["brackets"] = brackets;
    c.rep.result["structure_constants"] = consts;
    c.rep.status = Status::Verified;
  } else {
    auto [i, j] = *cl.offending;
    c.rep.result["offending"] = {i + 1, j + 1};
    c.rep.result["bracket"] = commutator(basis[i], basis[j]).str();
    c.rep.status = Status::Failed;
  }
}

void op_independent(Call& c) {
  bool ind = linearly_independent(c.fields("fields"));
  c.rep.result["independent"] = ind;
  c.rep.status = ind ? Status::Verified : Status::Failed;
}

void op_prolong_potsym(Call& c) {
  VectorField qhat = c.field("field");
  Expr alpha = c.expr("alpha");
  int u = c.dependent("u", "u"), v = c.dependent("v", "v");
  VectorField q = prolong_potential_symmetry(qhat, alpha, u, v);
  c.set_field(q);
  c.rep.status = Status::Verified;
  if (c.opt("system")) {
    Verdict vd = verify_lie_symmetry(q, c.attach(c.doc.system(c.need("system")), all_exprs(q)));
    c.rep.residuals = vd.residuals;
    if (!vd.holds) c.rep.status = Status::Failed;
  }
}

void op_pure_potential(Call& c) {
  bool pure = is_pure_potential(c.field("field"), c.dependents("potentials"));
  c.rep.result["pure_potential"] = pure;
  c.rep.status = pure ? Status::Verified : Status::Failed;
}

void op_determining(Call& c) {
  VectorField q = c.field("field");
  Expr alpha = c.opt("alpha") ? c.expr("alpha") : c.ctx().one();
  int u = c.dependent("u", "u"), v = c.dependent("v", "v");
  bool literal = c.opt("form").value_or("derived") == "literal";
  bool all = true;
  json ids = json::object();
  for (const auto& [name, e] : determining_identities(q, alpha, u, v, literal)) {
    ids[name] = e.str();
    c.rep.residuals.push_back(e);
    all = all && e.is_zero();
  }
  c.rep.result["identities"] = ids;
  c.rep.status = all ? Status::Verified : Status::Failed;
}

struct Entry {
  OperationInfo info;
  OpFn fn;
};

const std::vector<Entry>& table() {
  static const std::vector<Entry> t = {
      {{"reduce", {"system", "expr"}, {}, "normal form on solutions"}, op_reduce},
      {{"verify-cl", {"cv"}, {"system"}, "D_t T + D_x X vanishes on solutions"}, op_verify_cl},
      {{"char", {"cv"}, {"system"}, "characteristic of a conservation law"}, op_char},
      {{"trivial", {"cv"}, {"system"}, "characteristic vanishes on solutions"}, op_trivial},
      {{"equiv", {"a", "b"}, {"system"}, "difference is trivial"}, op_equiv},
      {{"potsys", {"cv"}, {"system", "potential", "save", "expect"}, "potential system v_x = T, v_t = -X"}, op_potsys},
      {{"poteq", {"system"}, {"save"}, "potential equation of a potential system"}, op_poteq},
      {{"jacobian", {"transform"}, {"potentials"}, "Jacobian of a point transformation"}, op_jacobian},
      {{"prolong", {"transform", "jet"}, {"potentials"}, "image of a jet coordinate"}, op_prolong},
      {{"prolong-vf", {"field", "jet"}, {}, "prolonged coefficient of a vector field"}, op_prolong_vf},
      {{"map-cv", {"transform", "cv", "target"}, {"source", "potentials", "save"}, "transformed conserved vector"},
       op_map_cv},
      {{"multiplier", {"transform", "source", "target"}, {"potentials"}, "multiplier between mapped equations"},
       op_multiplier},
      {{"map-char", {"transform", "source", "target"}, {"char", "cv", "potentials"}, "characteristic pulled back"},
       op_map_char},
      {{"pushforward", {"transform", "field"}, {"potentials", "span", "system"}, "vector field in the new variables"},
       op_pushforward},
      {{"verify-sym", {"system"}, {"field", "fields"}, "infinitesimal invariance criterion"}, op_verify_sym},
      {{"act", {"field", "cv"}, {"system"}, "symmetry action on a conserved vector"}, op_act},
      {{"invariant-cl", {"field", "cv"}, {"system"}, "conservation law invariant under a symmetry"}, op_invariant_cl},
      {{"commutator", {"a", "b"}, {}, "Lie bracket of two vector fields"}, op_commutator},
      {{"closure", {"fields"}, {}, "span closed under brackets"}, op_closure},
      {{"independent", {"fields"}, {}, "rational linear independence"}, op_independent},
      {{"prolong-potsym", {"field", "alpha"}, {"u", "v", "system"}, "extend a potential-equation symmetry to u"},
       op_prolong_potsym},
      {{"pure-potential", {"field", "potentials"}, {}, "d_u coefficient depends on a potential"}, op_pure_potential},
      {{"determining", {"field"}, {"alpha", "u", "v", "form"}, "determining identities of the potential system"},
       op_determining},
  };
  return t;
}

}  // namespace

const std::vector<OperationInfo>& operations() {
  static const std::vector<OperationInfo> infos = [] {
    std::vector<OperationInfo> out;
    for (const auto& e : table()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

Report run_operation(Document& doc, const std::string& op, const Args& args) {
  Report rep;
  rep.operation = op;
  auto start = std::chrono::steady_clock::now();
  try {
    auto it = std::find_if(table().begin(), table().end(), [&](const Entry& e) { return e.info.name == op; });
    if (it == table().end()) throw Error(ErrorKind::InvalidArgument, "unknown operation " + op);
    for (const auto& [k, v] : args) {
      const auto& req = it->info.required;
      const auto& opt = it->info.optional;
      if (std::find(req.begin(), req.end(), k) == req.end() && std::find(opt.begin(), opt.end(), k) == opt.end())
        throw Error(ErrorKind::InvalidArgument, "operation " + op + " takes no argument " + k);
    }
    Call call{doc, args, rep};
    it->fn(call);
  } catch (const Error& e) {
    rep.status = Status::Error;
    rep.error = e;
    rep.values.clear();
    rep.field.reset();
  }
  rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace potsym
