#include <gtest/gtest.h>

#include "potsym/jet.hpp"
#include "session.hpp"

using namespace potsym;
using potsym::testing::Session;

namespace {

TEST(TotalDerivative, ProductAndChainRules) {
  Session s;
  s.add("system S { u_t = u_xx; v_t = v_xx; } param alpha(t, x);");
  EXPECT_EQ(total_derivative(s("x*u"), Direction::X), s("u + x*u_x"));
  EXPECT_EQ(total_derivative(s("alpha*u"), Direction::T), s("alpha_t*u + alpha*u_t"));
  EXPECT_EQ(total_derivative(s("exp(v)"), Direction::X), s("v_x*exp(v)"));
  EXPECT_EQ(total_derivative(s("log(x)"), Direction::X), s("1/x"));
  EXPECT_EQ(total_derivative(s("u_x"), DerivIndex{2, 1}), s("u_ttxx"));
  EXPECT_EQ(explicit_derivative(s("t*u_x + x^2"), Direction::X), s("2*x"));
}

TEST(Reduction, HeatAndFokkerPlanck) {
  Session s(std::string(potsym::testing::kHeat) + potsym::testing::kFP);
  EXPECT_EQ(s.sys("HEAT").reduce(s("u_t")), s("u_xx"));
  EXPECT_EQ(s.sys("HEAT").reduce(s("u_tt")), s("u_xxxx"));
  EXPECT_EQ(s.sys("HEAT").reduce(s("u_ttx - u_xxxxx")), s("0"));
  EXPECT_EQ(s.sys("FP").reduce(s("u_t")), s("u_xx + x*u_x + u"));
  // by hand: D_t of the rule, then substitute again
  EXPECT_EQ(s.sys("FP").reduce(s("u_tt")),
            s("u_xxxx + 2*x*u_xxx + (x^2 + 4)*u_xx + 3*x*u_x + u"));
}

TEST(Reduction, ParameterConstraintsApplyAfterDependents) {
  Session s("param alpha(t, x) with alpha_t = x*alpha_x - alpha_xx;");
  s.add(potsym::testing::kFP);
  PDESystem fp = s.sys("FP").with_params({s.doc.param("alpha")});
  EXPECT_EQ(fp.reduce(s("alpha_t")), s("x*alpha_x - alpha_xx"));
  EXPECT_EQ(fp.reduce(s("alpha_tx")), s("alpha_x + x*alpha_xx - alpha_xxx"));
  EXPECT_EQ(fp.reduce(s("alpha*u_t - u*alpha_t")), s("alpha*(u_xx + x*u_x + u) - u*(x*alpha_x - alpha_xx)"));
}

TEST(Reduction, PotentialSystemIsCompatibleAndRecoversTheEquation) {
  Session s(potsym::testing::kFPpot);
  const PDESystem& p = s.sys("FPPOT");
  ASSERT_EQ(p.consequences().size(), 1u);
  EXPECT_EQ(p.reduce(s("u_t")), s("u_xx + x*u_x + u"));
  EXPECT_EQ(p.reduce(s("v_tx")), p.reduce(s("D[u_x + x*u, x]")));
  EXPECT_EQ(p.reduce(total_derivative(s("u_x + x*u"), Direction::X)),
            p.reduce(total_derivative(s("u"), Direction::T)));
  EXPECT_EQ(p.reduce(s("v_xx")), s("u_x"));
  EXPECT_EQ(p.reduce(s("v_tt")), p.reduce(s("u_tx + x*u_t")));
}

TEST(Reduction, IncompatibleSystemIsRejected) {
  Session s;
  try {
    s.add("system BAD { v_x = u; v_t = u_x; w_x = v; w_t = x; }");
    FAIL() << "expected an incompatibility";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IncompatibleSystem);
    EXPECT_TRUE(e.location().has_value());
  }
}

TEST(Reduction, RuleRightSidesMustBeFreeOfLeads) {
  Session s;
  try {
    s.add("system BAD { u_t = u_tx; }");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadRule);
  }
}

TEST(Prolongation, StandardExamples) {
  Session s(potsym::testing::kBurgers);
  int u = s.dep("u");
  auto scaling = prolong_vector_field(s.field("x*dx"), {u}, 1);
  EXPECT_EQ(scaling.at(Atom::jet(u, {0, 1})), s("-u_x"));
  auto galilean = prolong_vector_field(s.field("t*dx - du"), {u}, 1);
  EXPECT_EQ(galilean.at(Atom::jet(u, {0, 1})), s("0"));
  EXPECT_EQ(galilean.at(Atom::jet(u, {1, 0})), s("-u_x"));
  for (const auto& [a, c] : prolong_vector_field(VectorField::zero(s.ctx), {u}, 3)) EXPECT_TRUE(c.is_zero());
}

TEST(Prolongation, IsLinearInTheField) {
  Session s(potsym::testing::kHeat);
  int u = s.dep("u");
  VectorField a = s.field("4*t^2*dt + 4*t*x*dx - (x^2 + 2*t)*u*du");
  VectorField b = s.field("2*t*dx - x*u*du");
  Expr p = s("2/3"), q = s("-5");
  auto lhs = prolong_vector_field(a * p + b * q, {u}, 3);
  auto pa = prolong_vector_field(a, {u}, 3), pb = prolong_vector_field(b, {u}, 3);
  for (const auto& [atom, c] : lhs) EXPECT_EQ(c, pa.at(atom) * p + pb.at(atom) * q);
}

TEST(VectorFields, PointFieldsOnly) {
  Session s(potsym::testing::kHeat);
  try {
    s.field("u_x*du");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

}  // namespace
