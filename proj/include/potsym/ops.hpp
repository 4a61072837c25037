#pragma once

// Named operations over a parsed document, shared by the command line, the
// catalog runner and the Python module.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "potsym/parser.hpp"
#include "potsym/symmetry.hpp"

namespace potsym {

enum class Status { Verified, Failed, Error };
std::string_view to_string(Status s);

struct Report {
  Status status = Status::Error;
  std::string operation;
  std::vector<Expr> residuals;
  // The operation's main result, for comparison against expectations.
  std::vector<Expr> values;
  std::optional<VectorField> field;
  nlohmann::json result = nlohmann::json::object();
  std::optional<Error> error;
  double millis = 0;

  nlohmann::json to_json() const;
  std::string to_text() const;
  // 0 verified, 1 failed, 2 error
  int exit_code() const;
};

using Args = std::map<std::string, std::string>;

struct OperationInfo {
  std::string name;
  std::vector<std::string> required, optional;
  std::string summary;
};
const std::vector<OperationInfo>& operations();

// Never throws potsym::Error: failures are reported with Status::Error.
Report run_operation(Document& doc, const std::string& op, const Args& args);

}  // namespace potsym
