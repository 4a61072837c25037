#include <gtest/gtest.h>

#include "potsym/symmetry.hpp"
#include "potsym/transform.hpp"
#include "session.hpp"

using namespace potsym;
using potsym::testing::Session;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

struct FPHeat : ::testing::Test {
  Session s{std::string(potsym::testing::kHeat) + potsym::testing::kFP + potsym::testing::kT};
  const PointTransformation& T = s.doc.transform("TFP");
  int u = s.dep("u");
};

TEST_F(FPHeat, JacobianAndProlongation) {
  EXPECT_EQ(T.jacobian(), s("exp(3*t)"));
  EXPECT_EQ(T.prolonged(u, {0, 1}), s("exp(-2*t)*u_x"));
  EXPECT_EQ(T.prolonged(u, {1, 0}), s("exp(-3*t)*(u_t - u - x*u_x)"));
  EXPECT_EQ(T.prolonged(u, {0, 2}), s("exp(-3*t)*u_xx"));
  EXPECT_FALSE(T.domain_notes().empty());
}

TEST_F(FPHeat, Multiplier) {
  Multiplier m = compute_multiplier(T, s.sys("FP"), s.sys("HEAT"), s.doc.params);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0][0], s("exp(-3*t)"));
  EXPECT_EQ(kind_of([&] { compute_multiplier(T, s.sys("HEAT"), s.sys("HEAT"), s.doc.params); }),
            ErrorKind::MapMismatch);
}

TEST_F(FPHeat, SimplestLawMapsToTheHeatLaw) {
  ConservedVector fp1 = ConservedVector::make(s("u"), s("-u_x - x*u"));
  ConservedVector out = transform_conserved_vector(fp1, T, s.sys("FP"), s.sys("HEAT"), s.doc.params);
  EXPECT_EQ(out.T, s("u"));
  EXPECT_EQ(out.X, s("-u_x"));
  Multiplier m = compute_multiplier(T, s.sys("FP"), s.sys("HEAT"), s.doc.params);
  Characteristic c = transform_characteristic({{s("1")}}, T, m, s.sys("FP"), s.doc.params);
  EXPECT_TRUE(c.equals({{s("1")}}));
}

TEST_F(FPHeat, FamiliesCorrespond) {
  s.add("param a(t, x) with a_t = -a_xx;");
  s.add("param alpha(t, x) with alpha_t = x*alpha_x - alpha_xx;");
  PDESystem fp = s.sys("FP").with_params({s.doc.param("alpha")});
  ConservedVector fam = ConservedVector::make(s("alpha*u"), s("(alpha_x - x*alpha)*u - alpha*u_x"));
  ConservedVector out = transform_conserved_vector(fam, T, fp, s.sys("HEAT"), s.doc.params);
  Expr at = s("alphaTFP");
  ASSERT_TRUE(s.doc.params.count(*s.ctx.find_param_function("alphaTFP")));
  EXPECT_EQ(s.doc.params.at(*s.ctx.find_param_function("alphaTFP")).rhs, s("-alphaTFP_xx"));
  PDESystem heat = s.sys("HEAT").with_params(params_in({out.T, out.X}, s.doc.params));
  EXPECT_TRUE(verify_conservation_law(out, heat).holds);
  EXPECT_TRUE(are_equivalent(out, ConservedVector::make(s("alphaTFP*u"), s("alphaTFP_x*u - alphaTFP*u_x")), heat));

  // characteristic of the heat family pulled back: alpha~(exp(2t)/2, exp(t) x)
  Multiplier m = compute_multiplier(T, s.sys("FP"), s.sys("HEAT"), s.doc.params);
  Characteristic c = transform_characteristic({{s("a")}}, T, m, s.sys("FP"), s.doc.params);
  ASSERT_EQ(c.components.size(), 1u);
  EXPECT_EQ(c.components[0], s("aTFPinv"));
  EXPECT_EQ(s.doc.params.at(*s.ctx.find_param_function("aTFPinv")).rhs, s("x*aTFPinv_x - aTFPinv_xx"));
}

TEST_F(FPHeat, RoundTripIsEquivalent) {
  ConservedVector fp1 = ConservedVector::make(s("x*u + u_x"), s("-x*u_x - u_x - x^2*u - u_xx"));
  if (!verify_conservation_law(fp1, s.sys("FP")).holds) fp1 = ConservedVector::make(s("u"), s("-u_x - x*u"));
  PointTransformation inv = T.inverted();
  ConservedVector there = transform_conserved_vector(fp1, T, s.sys("FP"), s.sys("HEAT"), s.doc.params);
  ConservedVector back = transform_conserved_vector(there, inv, s.sys("HEAT"), s.sys("FP"), s.doc.params);
  EXPECT_TRUE(are_equivalent(back, fp1, s.sys("FP")));
}

TEST_F(FPHeat, PushForward) {
  EXPECT_TRUE(push_forward_vector_field(s.field("dt"), T, s.doc.params).equals(s.field("2*t*dt + x*dx - u*du")));
  EXPECT_TRUE(push_forward_vector_field(s.field("exp(-t)*dx"), T, s.doc.params).equals(s.field("dx")));
  VectorField a = s.field("exp(t)*dx - exp(t)*x*u*du"), b = s.field("exp(2*t)*dt + exp(2*t)*x*dx - exp(2*t)*x^2*u*du");
  VectorField lhs = push_forward_vector_field(commutator(a, b), T, s.doc.params);
  VectorField rhs = commutator(push_forward_vector_field(a, T, s.doc.params), push_forward_vector_field(b, T, s.doc.params));
  EXPECT_TRUE(lhs.equals(rhs));
}

TEST_F(FPHeat, ProlongationToPotentials) {
  s.add(potsym::testing::kFPpot);
  s.add(potsym::testing::kHeatPot);
  int v = s.dep("v");
  PointTransformation pr = prolong_to_potential(T, {v});
  EXPECT_EQ(pr.name(), "TFPpr");
  EXPECT_EQ(pr.forward().u.at(v), s("v"));
  Multiplier m = compute_multiplier(pr, s.sys("FPPOT"), s.sys("HPOT"), s.doc.params);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(kind_of([&] { prolong_to_potential(T, {u}); }), ErrorKind::NameCollision);
}

TEST(Transform, Identity) {
  Session s(std::string(potsym::testing::kHeat) + "transform ID { inverse { } }");
  const PointTransformation& g = s.doc.transform("ID");
  int u = s.dep("u");
  EXPECT_EQ(g.prolonged(u, {1, 2}), s("u_txx"));
  Multiplier m = compute_multiplier(g, s.sys("HEAT"), s.sys("HEAT"), s.doc.params);
  EXPECT_EQ(m[0][0], s("1"));
  ConservedVector c = ConservedVector::make(s("x*u"), s("u - x*u_x"));
  ConservedVector out = transform_conserved_vector(c, g, s.sys("HEAT"), s.sys("HEAT"), s.doc.params);
  EXPECT_EQ(out.T, c.T);
  EXPECT_EQ(out.X, c.X);
  VectorField q = s.field("x*dt + u*du");
  EXPECT_TRUE(push_forward_vector_field(q, g, s.doc.params).equals(q));
  Characteristic l{{s("x*u")}};
  EXPECT_TRUE(transform_characteristic(l, g, m, s.sys("HEAT"), s.doc.params).equals(l));
}

TEST(Transform, ColeHopfPotentialBurgers) {
  Session s("system PB { v_t = v_xx + v_x^2; } system HV { v_t = v_xx; }\n"
            "transform CH { v~ = exp(v); inverse { v = log(v); } }");
  Multiplier m = compute_multiplier(s.doc.transform("CH"), s.sys("PB"), s.sys("HV"), s.doc.params);
  EXPECT_EQ(m[0][0], s("exp(v)"));
}

TEST(Transform, Validation) {
  Session s(potsym::testing::kHeat);
  EXPECT_EQ(kind_of([&] { s.add("transform B { x~ = 2*x; inverse { x = x; } }"); }), ErrorKind::BadInverse);
  EXPECT_EQ(kind_of([&] { s.add("transform S { x~ = t; inverse { x = t; } }"); }), ErrorKind::SingularJacobian);
}

}  // namespace
