#include <sstream>

#include "potsym/expr.hpp"

namespace potsym {
namespace {

std::string factors(Context& ctx, const Monomial& m) {
  std::string s;
  for (auto [a, k] : m.powers) {
    if (!s.empty()) s += "*";
    s += ctx.atom_name(a);
    if (k != 1) s += "^" + std::to_string(k);
  }
  if (m.exp) {
    if (!s.empty()) s += "*";
    s += "exp(" + ctx.wrap(m.exp).str() + ")";
  }
  return s;
}

std::string poly_str(Context& ctx, const Poly& p) {
  if (p.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Term& t = p[i];
    bool negative = t.coef < 0;
    Rational mag = abs(t.coef);
    std::string f = factors(ctx, t.mono);
    std::string body;
    if (f.empty()) body = mag.get_str();
    else if (mag == 1) body = f;
    else body = mag.get_str() + "*" + f;
    if (i == 0) out += negative ? "-" + body : body;
    else out += (negative ? " - " : " + ") + body;
  }
  return out;
}

bool bare_factor(const Poly& p) {
  return p.size() == 1 && p[0].coef == 1 &&
         ((p[0].mono.powers.size() == 1 && !p[0].mono.exp) || (p[0].mono.powers.empty() && p[0].mono.exp));
}

}  // namespace

std::string Expr::str() const {
  if (!node_) return "<null>";
  std::string n = poly_str(*ctx_, num());
  if (is_polynomial()) return n;
  if (num().size() > 1) n = "(" + n + ")";
  std::string d = poly_str(*ctx_, den());
  if (!bare_factor(den())) d = "(" + d + ")";
  return n + "/" + d;
}

}  // namespace potsym
