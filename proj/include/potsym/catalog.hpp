#pragma once

// Regression cases stored as declaration files.  Besides declarations a case
// file holds directive comments:
//
//   #@ description: one line of text
//   #@ check OP key=value key="quoted value" origin=published|derived|trivial
//            [oracle="how the expectation was obtained"] => OUTCOME [: EXPECTED]
//
// OUTCOME is verified, failed or error:Kind.  EXPECTED is a vector-field
// expression for operations that produce a field, otherwise a
// ';'-separated list compared against the values (or, without values, the
// residuals) of the report.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "potsym/ops.hpp"

namespace potsym {

enum class Origin { Published, Derived, Trivial };
std::string_view to_string(Origin o);

struct Check {
  std::string operation;
  Args args;
  Origin origin = Origin::Derived;
  std::string oracle;
  Status expected = Status::Verified;
  std::optional<ErrorKind> expected_error;
  std::optional<std::string> expected_values;
  int line = 0;
};

struct CatalogCase {
  std::string id;
  std::string description;
  std::string source;
  std::vector<Check> checks;
};

struct CheckResult {
  Check check;
  Report report;
  bool passed = false;
  std::string mismatch;
};

struct CaseReport {
  // Owns the nodes behind every expression in the reports.
  std::shared_ptr<Context> context;
  std::string id;
  std::string description;
  std::vector<CheckResult> checks;
  // Set when the declarations themselves fail to load.
  std::optional<Error> error;
  double millis = 0;

  bool passed() const;
  std::size_t passed_count() const;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

// POTSYM_CATALOG_DIR from the environment, else the installed default.
std::filesystem::path default_catalog_dir();

// Parses the directive comments of a case file.  Throws InvalidArgument on a
// malformed directive.
CatalogCase parse_case(const std::string& id, const std::string& text);

struct CaseInfo {
  std::string id, description;
};
// Sorted by id.
std::vector<CaseInfo> list_cases(const std::filesystem::path& dir);

// Throws UnknownCase.
CatalogCase load_case(const std::filesystem::path& dir, const std::string& id);

// Every check runs against a fresh context; the report is a function of the
// case and the seed alone.
CaseReport run_case(const CatalogCase& c, std::uint64_t seed = 1);
CaseReport run_case(const std::filesystem::path& dir, const std::string& id, std::uint64_t seed = 1);

// Runs every case, fanning out over jobs worker threads; reports are in id
// order.
std::vector<CaseReport> run_all(const std::filesystem::path& dir, unsigned jobs = 1, std::uint64_t seed = 1);

}  // namespace potsym
