#include <gtest/gtest.h>

#include <algorithm>

#include "potsym/catalog.hpp"

using namespace potsym;

namespace {

const std::filesystem::path kDir = POTSYM_CATALOG_DIR;

bool listed(const std::string& id) {
  auto cases = list_cases(kDir);
  return std::any_of(cases.begin(), cases.end(), [&](const CaseInfo& c) { return c.id == id; });
}

std::string failures(const CaseReport& r) { return r.to_text(); }

}  // namespace

TEST(Catalog, ListingIsSortedAndNamesTheKnownCases) {
  auto cases = list_cases(kDir);
  ASSERT_FALSE(cases.empty());
  EXPECT_TRUE(std::is_sorted(cases.begin(), cases.end(), [](auto& a, auto& b) { return a.id < b.id; }));
  EXPECT_TRUE(listed("fp-to-heat-map"));
  EXPECT_TRUE(listed("heat-alpha-x-pure-potential"));
  for (const auto& c : cases) EXPECT_FALSE(c.description.empty()) << c.id;
}

TEST(Catalog, EveryCheckCarriesAnOriginAndDerivedOnesAnOracle) {
  for (const auto& info : list_cases(kDir)) {
    CatalogCase c = load_case(kDir, info.id);
    EXPECT_FALSE(c.checks.empty()) << info.id;
    for (const auto& ch : c.checks)
      if (ch.origin == Origin::Derived) EXPECT_FALSE(ch.oracle.empty()) << info.id << ":" << ch.line;
  }
}

class CatalogCaseTest : public ::testing::TestWithParam<std::string> {};

TEST_P(CatalogCaseTest, AllChecksMeetTheirExpectations) {
  CaseReport r = run_case(kDir, GetParam());
  EXPECT_TRUE(r.passed()) << failures(r);
  for (const auto& c : r.checks)
    if (c.report.status == Status::Verified)
      for (const auto& res : c.report.residuals) EXPECT_EQ(res.str(), "0") << r.id << ":" << c.check.line;
}

INSTANTIATE_TEST_SUITE_P(All, CatalogCaseTest, ::testing::ValuesIn([] {
                           std::vector<std::string> ids;
                           for (const auto& c : list_cases(kDir)) ids.push_back(c.id);
                           return ids;
                         }()),
                         [](const auto& info) {
                           std::string n = info.param;
                           std::replace(n.begin(), n.end(), '-', '_');
                           return n;
                         });

TEST(Catalog, SpotChecks) {
  CaseReport fam = run_case(kDir, "fp-cl-family");
  ASSERT_TRUE(fam.passed());
  EXPECT_EQ(fam.checks[0].report.residuals.at(0).str(), "0");

  CaseReport b0 = run_case(kDir, "burgers-b0");
  ASSERT_TRUE(b0.passed());
  EXPECT_EQ(b0.checks[0].report.result["verified_count"], 5);
  EXPECT_EQ(b0.checks[4].report.result["closed"], true);

  CaseReport hier = run_case(kDir, "burgers-potential-hierarchy");
  ASSERT_TRUE(hier.passed());
  EXPECT_EQ(hier.checks[1].report.status, Status::Verified);
  EXPECT_EQ(hier.checks[3].report.status, Status::Failed);
}

TEST(Catalog, UnknownCase) {
  try {
    run_case(kDir, "no-such-case");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownCase);
  }
  EXPECT_THROW(load_case(kDir, "../data"), Error);
}

TEST(Catalog, RunsAreDeterministicAndSideEffectFree) {
  CatalogCase c = load_case(kDir, "fp-to-heat-map");
  CaseReport a = run_case(c, 7), b = run_case(c, 7);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    auto ja = a.checks[i].report.to_json(), jb = b.checks[i].report.to_json();
    ja.erase("timing_ms");
    jb.erase("timing_ms");
    EXPECT_EQ(ja, jb);
  }
}

TEST(Catalog, ParallelRunMatchesSerial) {
  auto serial = run_all(kDir, 1), parallel = run_all(kDir, 4);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].id, parallel[i].id);
    EXPECT_EQ(serial[i].passed(), parallel[i].passed());
    EXPECT_EQ(serial[i].passed_count(), parallel[i].passed_count());
  }
}

TEST(CaseFile, DirectivesParse) {
  CatalogCase c = parse_case("x",
                             "#@ description: demo\n"
                             "system HEAT { u_t = u_xx; }\n"
                             "#@ check reduce system=HEAT expr=\"u_t + 1\" origin=trivial => verified : u_xx + 1\n"
                             "#@ check char cv=NOPE origin=derived oracle=\"none\" \\\n"
                             "#@   => error:UnknownSymbol\n");
  EXPECT_EQ(c.description, "demo");
  ASSERT_EQ(c.checks.size(), 2u);
  EXPECT_EQ(c.checks[0].args.at("expr"), "u_t + 1");
  EXPECT_EQ(*c.checks[0].expected_values, "u_xx + 1");
  EXPECT_EQ(c.checks[1].line, 4);
  EXPECT_EQ(*c.checks[1].expected_error, ErrorKind::UnknownSymbol);
  EXPECT_TRUE(run_case(c).passed());
}

TEST(CaseFile, WrongExpectationsAreCaught) {
  CatalogCase c = parse_case("x",
                             "system HEAT { u_t = u_xx; }\n"
                             "#@ check reduce system=HEAT expr=u_t origin=trivial => verified : u_xxx\n"
                             "#@ check reduce system=HEAT expr=u_t origin=trivial => failed\n"
                             "#@ check char cv=NOPE origin=trivial => error:BadRule\n"
                             "#@ check reduce system=HEAT expr=u_t origin=trivial => verified : u_xx ; 0\n");
  CaseReport r = run_case(c);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.passed_count(), 0u);
}

TEST(CaseFile, MalformedDirectives) {
  auto kind = [](const std::string& text) {
    try {
      parse_case("x", text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::DivisionByZero;
  };
  EXPECT_EQ(kind("#@ check reduce system=HEAT => verified\n"), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind("#@ check reduce origin=derived => verified\n"), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind("#@ check reduce origin=trivial => maybe\n"), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind("#@ check reduce origin=trivial\n"), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind("#@ frobnicate\n"), ErrorKind::InvalidArgument);
}

TEST(CaseFile, BrokenDeclarationsAreReportedNotThrown) {
  CaseReport r = run_case(parse_case("x", "system S { u_t = ; }\n"));
  ASSERT_TRUE(r.error.has_value());
  EXPECT_EQ(r.error->kind(), ErrorKind::SyntaxError);
  EXPECT_FALSE(r.passed());
}
