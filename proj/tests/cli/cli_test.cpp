#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

namespace {

struct Outcome {
  int code;
  std::string out;
};

Outcome potsym(const std::string& args) {
  std::string cmd = std::string(POTSYM_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string defs(const std::string& name) { return "--defs " + std::string(POTSYM_TEST_DATA) + "/" + name; }

struct Scenario {
  std::string name, args;
  int code;
};

void PrintTo(const Scenario& s, std::ostream* os) { *os << s.name; }

class CliScenario : public ::testing::TestWithParam<Scenario> {};

TEST_P(CliScenario, ExitCode) {
  Outcome r = potsym(GetParam().args);
  EXPECT_EQ(r.code, GetParam().code) << GetParam().args << "\n" << r.out;
}

const std::string fp = defs("fp.defs"), heat = defs("heat.defs"), broken = defs("broken.defs");

INSTANTIATE_TEST_SUITE_P(
    Smoke, CliScenario,
    ::testing::Values(
        Scenario{"verify_fp", "verify-cl " + fp + " --system FP --cv FP1 --format json", 0},
        Scenario{"verify_family", "verify-cl " + fp + " --cv FPFAM", 0},
        Scenario{"verify_flipped", "verify-cl " + heat + " --system HEAT --cv FLIP", 1},
        Scenario{"char_family", "char " + heat + " --system HEAT --cv HEATFAM", 0},
        Scenario{"trivial_negative", "trivial " + heat + " --cv HEAT1", 1},
        Scenario{"equiv_self", "equiv " + heat + " --a HEAT1 --b HEAT1", 0},
        Scenario{"potsys", "potsys " + heat + " --cv HEAT1 --expect HPOT", 0},
        Scenario{"poteq", "poteq " + heat + " --system HPOT", 0},
        Scenario{"map_cv", "map-cv " + fp + " --transform TFP --cv FP1 --target H", 0},
        Scenario{"multiplier", "multiplier " + fp + " --transform TFP --source FP --target H", 0},
        Scenario{"map_char", "map-char " + fp + " --transform TFP --source FP --target H --char 1", 0},
        Scenario{"pushforward", "pushforward " + fp + " --transform TFP --field dt", 0},
        Scenario{"verify_sym", "verify-sym " + heat + " --system HEAT --fields GAL,SCALE", 0},
        Scenario{"verify_sym_negative", "verify-sym " + heat + " --system HEAT --field \"u^2*du\"", 1},
        Scenario{"act", "act " + heat + " --field SCALE --cv HEAT1", 0},
        Scenario{"invariant_negative", "invariant-cl " + heat + " --field SCALE --cv HEAT1", 1},
        Scenario{"commutator", "commutator " + heat + " --a GAL --b SCALE", 0},
        Scenario{"closure", "closure " + heat + " --fields GAL,DX", 1},
        Scenario{"prolong_potsym", "prolong-potsym " + heat + " --field \"2*t*dx - x*v*dv\" --alpha 1 --system HPOT", 0},
        Scenario{"pure_potential", "pure-potential " + heat + " --field GT --potentials v", 0},
        Scenario{"parse_error", "verify-cl " + broken + " --cv BAD", 2},
        Scenario{"unknown_cv", "verify-cl " + heat + " --cv NOPE", 2},
        Scenario{"missing_arg", "verify-cl " + heat, 2},
        Scenario{"missing_file", "verify-cl --defs /nonexistent.defs --cv X", 2},
        Scenario{"bad_expression", "verify-sym " + heat + " --system HEAT --field \"u_x*du\"", 2},
        Scenario{"not_a_symmetry", "act " + heat + " --field \"u^2*du\" --cv HEAT1", 2},
        Scenario{"catalog_list", "catalog list", 0},
        Scenario{"catalog_run", "catalog run fp-cl-family", 0},
        Scenario{"catalog_unknown", "catalog run no-such-case", 2},
        Scenario{"no_subcommand", "", 2}),
    [](const auto& info) { return info.param.name; });

TEST(Cli, JsonReportShape) {
  Outcome r = potsym("verify-cl " + fp + " --system FP --cv FP1 --format json");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["status"], "verified");
  EXPECT_EQ(j["operation"], "verify-cl");
  EXPECT_EQ(j["residuals"], nlohmann::json::array({"0"}));
  EXPECT_TRUE(j.contains("timing_ms"));
  EXPECT_TRUE(j["error"].is_null());
}

TEST(Cli, CharacteristicOfTheHeatFamilyIsAlpha) {
  Outcome r = potsym("char " + heat + " --system HEAT --cv HEATFAM --format json");
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["result"]["characteristic"], nlohmann::json::array({"alpha"}));
}

TEST(Cli, FlippedFluxResidual) {
  Outcome r = potsym("verify-cl " + heat + " --system HEAT --cv FLIP --format json");
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["status"], "failed");
  EXPECT_EQ(j["residuals"], nlohmann::json::array({"2*u_xx"}));
}

TEST(Cli, ErrorsCarryKindAndLocation) {
  Outcome r = potsym("verify-cl " + heat + " --cv NOPE --format json");
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["status"], "error");
  EXPECT_EQ(j["error"]["kind"], "UnknownSymbol");
}

TEST(Cli, CatalogRunAllInParallel) {
  Outcome r = potsym("catalog run-all --jobs 4 --format json");
  EXPECT_EQ(r.code, 0) << r.out;
  auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  for (const auto& c : j) EXPECT_TRUE(c["passed"].get<bool>()) << c["id"];
}

}  // namespace
