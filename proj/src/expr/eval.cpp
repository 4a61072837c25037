#include <cmath>
#include <unordered_map>

#include "potsym/expr.hpp"

namespace potsym {
namespace {

class Evaluator {
 public:
  Evaluator(Context& ctx, const std::map<Atom, double>& point) : ctx_(ctx), point_(point) {}

  double of(const Expr& e) {
    auto it = memo_.find(e.node());
    if (it != memo_.end()) return it->second;
    double den = of_poly(e.den());
    if (std::fabs(den) < 1e-12) throw Error(ErrorKind::NumericSingularity, "denominator vanishes at sample point");
    double v = of_poly(e.num()) / den;
    memo_.emplace(e.node(), v);
    return v;
  }

 private:
  double atom(Atom a) {
    if (a.kind() == AtomKind::Log) {
      double arg = of(ctx_.log_argument(a));
      if (!(arg > 0.0)) throw Error(ErrorKind::NumericSingularity, "log of a non-positive value");
      return std::log(arg);
    }
    auto it = point_.find(a);
    if (it == point_.end())
      throw Error(ErrorKind::InvalidArgument, "no value for atom " + ctx_.atom_name(a));
    return it->second;
  }

  double of_poly(const Poly& p) {
    double sum = 0.0;
    for (const auto& t : p) {
      double v = t.coef.get_d();
      for (auto [a, k] : t.mono.powers) v *= std::pow(atom(a), k);
      if (t.mono.exp) v *= std::exp(of(ctx_.wrap(t.mono.exp)));
      sum += v;
    }
    return sum;
  }

  Context& ctx_;
  const std::map<Atom, double>& point_;
  std::unordered_map<const Node*, double> memo_;
};

}  // namespace

double evaluate_numeric(const Expr& e, const std::map<Atom, double>& point) {
  Evaluator ev(e.context(), point);
  return ev.of(e);
}

}  // namespace potsym
