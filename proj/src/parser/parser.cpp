#include "potsym/parser.hpp"

#include <cctype>

#include "potsym/raw.hpp"

namespace potsym {

// ---------------------------------------------------------------- document

namespace {

template <class Map>
const auto& lookup(const Map& m, const std::string& name, const char* what) {
  auto it = m.find(name);
  if (it == m.end()) throw Error(ErrorKind::UnknownSymbol, std::string("no ") + what + " named " + name);
  return it->second;
}

}  // namespace

const PDESystem& Document::system(const std::string& name) const { return lookup(systems_, name, "system"); }
const NamedCV& Document::cv(const std::string& name) const { return lookup(cvs_, name, "conserved vector"); }
const PointTransformation& Document::transform(const std::string& name) const {
  return lookup(transforms_, name, "transformation");
}
const NamedField& Document::field(const std::string& name) const { return lookup(fields_, name, "vector field"); }
const ParamFunction& Document::param(const std::string& name) const {
  return params.at(lookup(param_ids_, name, "parameter function"));
}

void Document::add_system(PDESystem sys) {
  std::string n = sys.name();
  if (!systems_.emplace(n, std::move(sys)).second) throw Error(ErrorKind::DuplicateName, "system " + n + " is declared twice");
  system_order_.push_back(n);
}

void Document::add_cv(NamedCV cv) {
  std::string n = cv.name;
  if (!cvs_.emplace(n, std::move(cv)).second)
    throw Error(ErrorKind::DuplicateName, "conserved vector " + n + " is declared twice");
  cv_order_.push_back(n);
}

void Document::add_transform(PointTransformation g) {
  std::string n = g.name();
  if (!transforms_.emplace(n, std::move(g)).second)
    throw Error(ErrorKind::DuplicateName, "transformation " + n + " is declared twice");
  transform_order_.push_back(n);
}

void Document::add_field(NamedField f) {
  std::string n = f.name;
  if (!fields_.emplace(n, std::move(f)).second) throw Error(ErrorKind::DuplicateName, "vector field " + n + " is declared twice");
  field_order_.push_back(n);
}

void Document::add_param(ParamFunction p) {
  if (param_ids_.count(p.name)) throw Error(ErrorKind::DuplicateName, "parameter function " + p.name + " is declared twice");
  if (dependents_.count(p.name)) throw Error(ErrorKind::DuplicateName, p.name + " is already a dependent variable");
  param_ids_[p.name] = p.id;
  param_order_.push_back(p.name);
  params[p.id] = std::move(p);
}

void Document::declare_dependent(const std::string& name) {
  if (param_ids_.count(name)) throw Error(ErrorKind::DuplicateName, name + " is already a parameter function");
  ctx_->dependent(name);
  dependents_.insert(name);
}

// ---------------------------------------------------------------- lexer

namespace {

struct Token {
  enum Kind { Ident, Number, Punct, End } kind = End;
  std::string text;
  bool has_suffix = false;
  std::string suffix;
  SourceLocation at;
};

bool before(SourceLocation a, SourceLocation b) { return a.line < b.line || (a.line == b.line && a.column < b.column); }

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&] {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    Token tk;
    tk.at = {line, col};
    if (std::isalpha(static_cast<unsigned char>(c))) {
      tk.kind = Token::Ident;
      while (i < src.size() && std::isalnum(static_cast<unsigned char>(src[i]))) {
        tk.text += src[i];
        advance();
      }
      if (i < src.size() && src[i] == '_') {
        tk.has_suffix = true;
        advance();
        while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
          tk.suffix += src[i];
          advance();
        }
      }
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      tk.kind = Token::Number;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        tk.text += src[i];
        advance();
      }
      if (i < src.size() && src[i] == '.')
        throw Error(ErrorKind::SyntaxError, "decimal literals are not supported; write a quotient such as 3/2", SourceLocation{line, col});
      if (i < src.size() && (std::isalpha(static_cast<unsigned char>(src[i])) || src[i] == '_'))
        throw Error(ErrorKind::SyntaxError, "implicit multiplication is not allowed; write " + tk.text + "*...",
                    SourceLocation{line, col});
    } else if (std::string_view("(){}[],;=~+-*/^").find(c) != std::string_view::npos) {
      tk.kind = Token::Punct;
      tk.text = std::string(1, c);
      advance();
    } else {
      throw Error(ErrorKind::SyntaxError, std::string("unexpected character '") + c + "'", tk.at);
    }
    out.push_back(std::move(tk));
  }
  Token end;
  end.kind = Token::End;
  end.at = {line, col};
  out.push_back(end);
  return out;
}

const std::set<std::string>& reserved() {
  static const std::set<std::string> r{"param", "system", "cv", "transform", "inverse", "vf", "with",
                                       "on",    "exp",    "log", "D",         "t",       "x",  "dt", "dx"};
  return r;
}

// Every name a document declares, with its first position, so that uses
// before the declaration can be reported as forward references.
struct Declared {
  SourceLocation at;
  bool dependent = false;
};

std::map<std::string, Declared> prescan(const std::vector<Token>& toks) {
  std::map<std::string, Declared> out;
  auto note = [&](const Token& tk, bool dependent = false) { out.emplace(tk.text, Declared{tk.at, dependent}); };
  int depth = 0;
  std::string block;
  bool stmt_start = true;
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    const Token& tk = toks[i];
    const Token& nx = toks[i + 1];
    if (tk.kind == Token::Punct) {
      if (tk.text == "{") ++depth;
      if (tk.text == "}") --depth;
      if (depth == 0 && tk.text == "}") block.clear();
      stmt_start = tk.text == ";" || tk.text == "{" || tk.text == "}";
      continue;
    }
    if (depth == 0 && tk.kind == Token::Ident && nx.kind == Token::Ident &&
        (tk.text == "param" || tk.text == "system" || tk.text == "cv" || tk.text == "transform" || tk.text == "vf")) {
      note(nx);
      if (tk.text == "system" || tk.text == "transform") block = tk.text;
    } else if (depth > 0 && stmt_start && tk.kind == Token::Ident) {
      if (block == "system" && nx.kind == Token::Punct && nx.text == "=") note(tk, true);
      if (block == "transform" && nx.kind == Token::Punct && nx.text == "~") note(tk, true);
    }
    stmt_start = false;
  }
  return out;
}

// ---------------------------------------------------------------- parser

class Parser {
 public:
  Parser(std::vector<Token> toks, Document& doc, std::map<std::string, Declared> declared)
      : toks_(std::move(toks)), doc_(doc), ctx_(doc.context()), declared_(std::move(declared)) {}

  void document() {
    while (peek().kind != Token::End) declaration();
  }

  Expr standalone_expr() {
    Expr e = expression();
    if (peek().kind != Token::End) fail_unexpected("end of expression");
    return e;
  }

  VectorField standalone_field() {
    markers_ = true;
    SourceLocation at = peek().at;
    Expr e = expression();
    if (peek().kind != Token::End) fail_unexpected("end of expression");
    return to_field(e, at);
  }

 private:
  // -- token helpers
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool is_punct(const char* p, std::size_t k = 0) const { return peek(k).kind == Token::Punct && peek(k).text == p; }
  bool is_word(const char* w) const { return peek().kind == Token::Ident && !peek().has_suffix && peek().text == w; }
  [[noreturn]] void fail_unexpected(const std::string& wanted) const {
    const Token& tk = peek();
    std::string got = tk.kind == Token::End ? "end of input" : "'" + tk.text + (tk.has_suffix ? "_" + tk.suffix : "") + "'";
    throw Error(ErrorKind::SyntaxError, "expected " + wanted + ", found " + got, tk.at);
  }
  void expect(const char* p) {
    if (!is_punct(p)) fail_unexpected(std::string("'") + p + "'");
    ++pos_;
  }
  void expect_word(const char* w) {
    if (!is_word(w)) fail_unexpected(std::string("'") + w + "'");
    ++pos_;
  }
  const Token& name_token(const char* what) {
    if (peek().kind != Token::Ident) fail_unexpected(what);
    const Token& tk = next();
    if (tk.has_suffix) throw Error(ErrorKind::SyntaxError, std::string(what) + " cannot carry a derivative suffix", tk.at);
    if (reserved().count(tk.text)) throw Error(ErrorKind::SyntaxError, "'" + tk.text + "' is a reserved word", tk.at);
    return tk;
  }

  // -- declarations
  void declaration() {
    const Token& kw = peek();
    SourceLocation at = kw.at;
    try {
      if (is_word("param")) return param_decl();
      if (is_word("system")) return system_decl();
      if (is_word("cv")) return cv_decl();
      if (is_word("transform")) return transform_decl();
      if (is_word("vf")) return vf_decl();
    } catch (const Error& e) {
      if (e.location()) throw;
      throw Error(e.kind(), e.what(), at);
    }
    fail_unexpected("a declaration (param, system, cv, transform or vf)");
  }

  void param_decl() {
    ++pos_;
    const Token& name = name_token("parameter name");
    if (ctx_.find_param_function(name.text) && doc_.params.count(*ctx_.find_param_function(name.text)))
      throw Error(ErrorKind::DuplicateName, "parameter function " + name.text + " is declared twice", name.at);
    if (doc_.has_dependent(name.text))
      throw Error(ErrorKind::DuplicateName, name.text + " is already a dependent variable", name.at);
    expect("(");
    expect_word("t");
    expect(",");
    expect_word("x");
    expect(")");
    ParamFunction p{name.text, ctx_.param_function(name.text), std::nullopt, ctx_.zero()};
    if (is_word("with")) {
      ++pos_;
      const Token& lhs = peek();
      if (lhs.kind != Token::Ident || lhs.text != name.text)
        throw Error(ErrorKind::BadConstraint, "the constraint of " + name.text + " must solve for a derivative of " + name.text,
                    lhs.at);
      ++pos_;
      DerivIndex k = suffix_index(lhs);
      if (k.kt < 1)
        throw Error(ErrorKind::BadConstraint, "the constraint of " + name.text + " must solve for a t-derivative", lhs.at);
      expect("=");
      pending_param_ = p.id;
      p.lead = k;
      p.rhs = expression();
      pending_param_ = -1;
      try {
        validate_constraint(p);
      } catch (const Error& e) {
        throw Error(e.kind(), e.what(), lhs.at);
      }
    }
    expect(";");
    doc_.add_param(std::move(p));
  }

  void system_decl() {
    ++pos_;
    const Token& name = name_token("system name");
    if (doc_.has_system(name.text)) throw Error(ErrorKind::DuplicateName, "system " + name.text + " is declared twice", name.at);
    expect("{");
    in_system_ = true;
    std::vector<Rule> rules;
    std::vector<int> deps;
    SourceLocation at = name.at;
    while (!is_punct("}")) {
      const Token& lead = peek();
      if (lead.kind != Token::Ident) fail_unexpected("a leading derivative");
      ++pos_;
      if (reserved().count(lead.text) || ctx_.find_param_function(lead.text))
        throw Error(ErrorKind::BadRule, "left-hand side " + lead.text + " is not a dependent variable", lead.at);
      DerivIndex k = suffix_index(lead);
      if (!doc_.has_dependent(lead.text)) doc_.declare_dependent(lead.text);
      int dep = *ctx_.find_dependent(lead.text);
      expect("=");
      Expr rhs = expression();
      expect(";");
      deps.push_back(dep);
      for (Atom a : atoms_of(rhs))
        if (a.kind() == AtomKind::Jet) deps.push_back(a.owner());
      rules.push_back(Rule{Atom::jet(dep, k), rhs, ctx_.zero(), false});
    }
    expect("}");
    in_system_ = false;
    std::vector<Expr> rhss;
    for (const Rule& r : rules) rhss.push_back(r.rhs);
    try {
      doc_.add_system(PDESystem::create(ctx_, name.text, deps, std::move(rules), params_in(rhss, doc_.params)));
    } catch (const Error& e) {
      if (e.location()) throw;
      throw Error(e.kind(), e.what(), at);
    }
  }

  void cv_decl() {
    ++pos_;
    const Token& name = name_token("conserved-vector name");
    expect("=");
    expect("(");
    Expr T = expression();
    expect(",");
    Expr X = expression();
    expect(")");
    NamedCV cv{name.text, ConservedVector::make(T, X), std::nullopt, name.at};
    if (is_word("on")) {
      ++pos_;
      const Token& sys = name_token("system name");
      if (!doc_.has_system(sys.text)) unknown(sys.text, sys.at, "system");
      cv.system = sys.text;
    }
    expect(";");
    try {
      doc_.add_cv(std::move(cv));
    } catch (const Error& e) {
      throw Error(e.kind(), e.what(), name.at);
    }
  }

  void transform_decl() {
    ++pos_;
    const Token& name = name_token("transformation name");
    expect("{");
    // targets of this block are in scope from its start
    for (std::size_t k = pos_; k + 1 < toks_.size() && !(toks_[k].kind == Token::Punct && toks_[k].text == "}"); ++k)
      if (toks_[k].kind == Token::Ident && toks_[k + 1].kind == Token::Punct && toks_[k + 1].text == "~" &&
          toks_[k].text != "t" && toks_[k].text != "x" && !toks_[k].has_suffix && !doc_.has_dependent(toks_[k].text) &&
          !ctx_.find_param_function(toks_[k].text) && !reserved().count(toks_[k].text))
        doc_.declare_dependent(toks_[k].text);
    CoordinateMap fwd, inv;
    auto assign = [&](CoordinateMap& m, const Token& lhs, Expr rhs) {
      Expr* slot = nullptr;
      if (lhs.text == "t") slot = &m.t;
      else if (lhs.text == "x") slot = &m.x;
      else if (doc_.has_dependent(lhs.text)) slot = &m.u[*ctx_.find_dependent(lhs.text)];
      else throw Error(ErrorKind::UnknownSymbol, lhs.text + " is not t, x or a dependent variable", lhs.at);
      if (slot->valid()) throw Error(ErrorKind::DuplicateName, lhs.text + " is assigned twice", lhs.at);
      *slot = rhs;
    };
    while (!is_word("inverse")) {
      if (peek().kind != Token::Ident) fail_unexpected("a target variable or 'inverse'");
      const Token& lhs = next();
      if (lhs.has_suffix) throw Error(ErrorKind::SyntaxError, "transformation targets cannot carry suffixes", lhs.at);
      expect("~");
      expect("=");
      Expr rhs = expression();
      expect(";");
      assign(fwd, lhs, rhs);
    }
    ++pos_;
    expect("{");
    while (!is_punct("}")) {
      if (peek().kind != Token::Ident) fail_unexpected("a source variable");
      const Token& lhs = next();
      if (lhs.has_suffix) throw Error(ErrorKind::SyntaxError, "inverse targets cannot carry suffixes", lhs.at);
      expect("=");
      Expr rhs = expression();
      expect(";");
      assign(inv, lhs, rhs);
    }
    expect("}");
    expect("}");
    try {
      doc_.add_transform(PointTransformation::create(ctx_, name.text, fwd, inv, doc_.seed));
    } catch (const Error& e) {
      if (e.location()) throw;
      throw Error(e.kind(), e.what(), name.at);
    }
  }

  void vf_decl() {
    ++pos_;
    const Token& name = name_token("vector-field name");
    expect("=");
    markers_ = true;
    SourceLocation at = peek().at;
    Expr e = expression();
    markers_ = false;
    expect(";");
    doc_.add_field(NamedField{name.text, to_field(e, at), name.at});
  }

  VectorField to_field(const Expr& e, SourceLocation at) {
    std::map<Atom, std::optional<int>> markers;  // marker -> dependent (none for t, x)
    for (Atom a : atoms_of(e))
      if (a.kind() == AtomKind::Formal) {
        const std::string& n = ctx_.formal_name(a.owner());
        if (n == "d/dt" || n == "d/dx") markers[a] = std::nullopt;
        else markers[a] = *ctx_.find_dependent(n.substr(2));
      }
    VectorField q = VectorField::zero(ctx_);
    Expr rest = e;
    for (const auto& [m, dep] : markers) {
      Expr c = partial_derivative(e, m);
      for (Atom a : atoms_of(c))
        if (a.kind() == AtomKind::Formal)
          throw Error(ErrorKind::SyntaxError, "a vector field must be linear in dt, dx and the d-markers", at);
      rest = rest - c * ctx_.atom(m);
      const std::string& n = ctx_.formal_name(m.owner());
      if (n == "d/dt") q.tau = c;
      else if (n == "d/dx") q.xi = c;
      else q.eta[*dep] = c;
    }
    if (!rest.is_zero())
      throw Error(ErrorKind::SyntaxError, "a vector field must be a sum of coefficients times dt, dx and d-markers", at);
    try {
      validate_point_field(q);
    } catch (const Error& err) {
      throw Error(err.kind(), err.what(), at);
    }
    return q;
  }

  // -- expressions
  Expr expression() {
    RawPtr raw = sum();
    return canonicalize(ctx_, *raw, {}, [](const Expr& e, Direction d) { return total_derivative(e, d); });
  }

  RawPtr sum() {
    RawPtr lhs = product();
    while (is_punct("+") || is_punct("-")) {
      const Token& op = next();
      RawPtr rhs = product();
      lhs = RawExpr::binary(op.text == "+" ? RawExpr::Op::Add : RawExpr::Op::Sub, lhs, rhs, op.at);
    }
    return lhs;
  }

  RawPtr product() {
    RawPtr lhs = unary();
    for (;;) {
      if (is_punct("*") || is_punct("/")) {
        const Token& op = next();
        RawPtr rhs = unary();
        lhs = RawExpr::binary(op.text == "*" ? RawExpr::Op::Mul : RawExpr::Op::Div, lhs, rhs, op.at);
      } else if (peek().kind == Token::Ident || peek().kind == Token::Number || is_punct("(")) {
        throw Error(ErrorKind::SyntaxError, "implicit multiplication is not allowed; insert '*'", peek().at);
      } else {
        return lhs;
      }
    }
  }

  RawPtr unary() {
    if (is_punct("-")) {
      const Token& op = next();
      return RawExpr::unary(RawExpr::Op::Neg, unary(), op.at);
    }
    if (is_punct("+")) {
      ++pos_;
      return unary();
    }
    return power();
  }

  RawPtr power() {
    RawPtr base = primary();
    if (is_punct("^")) {
      const Token& op = next();
      long e = exponent();
      return RawExpr::raise(base, static_cast<int>(e), op.at);
    }
    return base;
  }

  long exponent() {
    bool paren = false;
    if (is_punct("(")) {
      paren = true;
      ++pos_;
    }
    bool neg = false;
    if (is_punct("-")) {
      neg = true;
      ++pos_;
    }
    if (peek().kind != Token::Number) fail_unexpected("an integer exponent");
    const Token& n = next();
    if (n.text.size() > 4) throw Error(ErrorKind::SyntaxError, "exponent too large", n.at);
    long v = std::stol(n.text);
    if (paren) expect(")");
    if (neg) v = -v;
    if (is_punct("^")) {
      const Token& op = next();
      long e = exponent();
      if (e < 0) throw Error(ErrorKind::SyntaxError, "exponent must be an integer", op.at);
      long r = 1;
      for (long i = 0; i < e; ++i) {
        r *= v;
        if (r > 10000 || r < -10000) throw Error(ErrorKind::SyntaxError, "exponent too large", op.at);
      }
      v = r;
    }
    if (v > 10000 || v < -10000) throw Error(ErrorKind::SyntaxError, "exponent too large", n.at);
    return v;
  }

  RawPtr primary() {
    const Token& tk = peek();
    if (tk.kind == Token::Number) {
      ++pos_;
      return RawExpr::number(Rational(tk.text), tk.at);
    }
    if (is_punct("(")) {
      ++pos_;
      RawPtr inner = sum();
      expect(")");
      return inner;
    }
    if (tk.kind != Token::Ident) fail_unexpected("an expression");
    if (!tk.has_suffix && (tk.text == "exp" || tk.text == "log") && is_punct("(", 1)) {
      pos_ += 2;
      RawPtr arg = sum();
      expect(")");
      return RawExpr::unary(tk.text == "exp" ? RawExpr::Op::Exp : RawExpr::Op::Log, arg, tk.at);
    }
    if (!tk.has_suffix && tk.text == "D" && is_punct("[", 1)) {
      pos_ += 2;
      RawPtr arg = sum();
      std::vector<Direction> dirs;
      while (is_punct(",")) {
        ++pos_;
        if (is_word("t")) dirs.push_back(Direction::T);
        else if (is_word("x")) dirs.push_back(Direction::X);
        else if (peek().kind == Token::Ident)
          throw Error(ErrorKind::UnknownSymbol, "unknown independent variable " + peek().text, peek().at);
        else fail_unexpected("t or x");
        ++pos_;
      }
      expect("]");
      return RawExpr::derivative(arg, std::move(dirs), tk.at);
    }
    ++pos_;
    RawPtr leaf = RawExpr::of(resolve(tk));
    auto r = std::make_shared<RawExpr>(*leaf);
    r->where = tk.at;
    return r;
  }

  DerivIndex suffix_index(const Token& tk) const {
    DerivIndex k;
    if (!tk.has_suffix) return k;
    if (tk.suffix.empty()) throw Error(ErrorKind::BadDerivativeSuffix, "empty derivative suffix after " + tk.text + "_", tk.at);
    for (char c : tk.suffix) {
      if (c == 't') ++k.kt;
      else if (c == 'x') ++k.kx;
      else if (std::isalpha(static_cast<unsigned char>(c)))
        throw Error(ErrorKind::UnknownSymbol,
                    std::string("unknown independent variable '") + c + "' in " + tk.text + "_" + tk.suffix, tk.at);
      else
        throw Error(ErrorKind::BadDerivativeSuffix,
                    "derivative suffix " + tk.suffix + " may only contain t and x", tk.at);
    }
    return k;
  }

  Expr resolve(const Token& tk) {
    const std::string& n = tk.text;
    if (n == "t" || n == "x") {
      if (tk.has_suffix) throw Error(ErrorKind::BadDerivativeSuffix, n + " is an independent variable and takes no suffix", tk.at);
      return n == "t" ? ctx_.t() : ctx_.x();
    }
    if (n == "exp" || n == "log" || n == "D")
      throw Error(ErrorKind::SyntaxError, n + " must be applied to an argument", tk.at);
    if (markers_ && !tk.has_suffix && n.size() > 1 && n[0] == 'd' && !doc_.has_dependent(n)) {
      std::string rest = n.substr(1);
      if (rest == "t" || rest == "x") return ctx_.formal(ctx_.formal_symbol("d/d" + rest));
      if (doc_.has_dependent(rest)) return ctx_.formal(ctx_.formal_symbol("d/" + rest));
    }
    DerivIndex k = suffix_index(tk);
    if (doc_.has_dependent(n)) return ctx_.jet(*ctx_.find_dependent(n), k);
    if (auto id = ctx_.find_param_function(n); id && (doc_.params.count(*id) || *id == pending_param_))
      return ctx_.param(*id, k);
    if (in_system_ && implicit_dependent(n, tk.at)) {
      doc_.declare_dependent(n);
      return ctx_.jet(*ctx_.find_dependent(n), k);
    }
    unknown(n, tk.at, "symbol");
  }

  // Inside a system body an undeclared name is a dependent without a rule
  // (the u of v_x = u), unless the document declares it later as something else.
  bool implicit_dependent(const std::string& name, SourceLocation at) const {
    if (reserved().count(name)) return false;
    auto it = declared_.find(name);
    return it == declared_.end() || it->second.dependent || !before(at, it->second.at);
  }

  [[noreturn]] void unknown(const std::string& name, SourceLocation at, const char* what) const {
    auto it = declared_.find(name);
    if (it != declared_.end() && before(at, it->second.at))
      throw Error(ErrorKind::ForwardReference, name + " is used before its declaration at line " +
                                                   std::to_string(it->second.at.line),
                  at);
    throw Error(ErrorKind::UnknownSymbol, std::string("unknown ") + what + " " + name, at);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Document& doc_;
  Context& ctx_;
  std::map<std::string, Declared> declared_;
  bool markers_ = false;
  bool in_system_ = false;
  int pending_param_ = -1;
};

}  // namespace

Expr parse_expr(const std::string& text, const Document& scope) {
  Parser p(lex(text), const_cast<Document&>(scope), {});
  return p.standalone_expr();
}

VectorField parse_vector_field(const std::string& text, const Document& scope) {
  Parser p(lex(text), const_cast<Document&>(scope), {});
  return p.standalone_field();
}

void parse_into(Document& doc, const std::string& text) {
  std::vector<Token> toks = lex(text);
  auto declared = prescan(toks);
  Parser p(std::move(toks), doc, std::move(declared));
  p.document();
}

Document parse_document(Context& ctx, const std::string& text) {
  Document doc(ctx);
  parse_into(doc, text);
  return doc;
}

}  // namespace potsym
