// potsym: run operations on declaration files.
//
//   potsym verify-cl --defs fp.defs --cv FP1 --format json
//   potsym catalog run-all --jobs 4
//
// Exit status: 0 verified, 1 failed verification, 2 input or usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "potsym/catalog.hpp"

namespace {

using namespace potsym;

struct Options {
  std::vector<std::string> defs;
  std::string format = "text";
  std::uint64_t seed = 1;
};

int user_error(const std::string& msg) {
  std::cerr << "potsym: " << msg << "\n";
  return 2;
}

int run_op(const Options& o, const std::string& op, const std::map<std::string, std::string>& given) {
  Context ctx;
  Document doc(ctx);
  doc.seed = o.seed;
  for (const auto& path : o.defs) {
    std::ifstream in(path);
    if (!in) return user_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      parse_into(doc, ss.str());
    } catch (const Error& e) {
      return user_error(path + ": " + e.describe());
    }
  }
  Args args;
  for (const auto& [k, v] : given)
    if (!v.empty()) args[k] = v;
  Report r = run_operation(doc, op, args);
  if (o.format == "json") std::cout << r.to_json().dump(2) << "\n";
  else std::cout << r.to_text();
  if (r.error) std::cerr << "potsym: " << r.error->describe() << "\n";
  return r.exit_code();
}

int print_cases(const Options& o, const std::vector<CaseReport>& reps) {
  bool ok = true, broken = false;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reps) {
    ok = ok && r.passed();
    broken = broken || r.error.has_value();
    if (o.format == "json") arr.push_back(r.to_json());
    else std::cout << r.to_text();
  }
  if (o.format == "json") std::cout << (reps.size() == 1 ? arr[0] : arr).dump(2) << "\n";
  return broken ? 2 : ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conservation laws, potential systems and symmetries of 1+1-dimensional PDEs"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--defs", o.defs, "declaration file (repeatable)")->check(CLI::ExistingFile);
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", o.seed, "seed for randomized checks");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::string op_name;
  for (const auto& info : operations()) {
    CLI::App* sub = app.add_subcommand(info.name, info.summary);
    sub->fallthrough();
    auto& slots = values[info.name];
    for (const auto& k : info.required) sub->add_option("--" + k, slots[k])->required();
    for (const auto& k : info.optional) sub->add_option("--" + k, slots[k]);
    sub->callback([&op_name, name = info.name] { op_name = name; });
  }

  CLI::App* cat = app.add_subcommand("catalog", "regression cases");
  cat->require_subcommand(1);
  cat->fallthrough();
  std::string data = default_catalog_dir().string();
  cat->add_option("--data", data, "catalog directory");
  CLI::App* list = cat->add_subcommand("list", "list case ids");
  CLI::App* run = cat->add_subcommand("run", "run one case");
  std::string case_id;
  run->add_option("id", case_id)->required();
  CLI::App* all = cat->add_subcommand("run-all", "run every case");
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  all->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cat->parsed()) {
      if (list->parsed()) {
        auto cases = list_cases(data);
        if (o.format == "json") {
          nlohmann::json arr = nlohmann::json::array();
          for (const auto& c : cases) arr.push_back({{"id", c.id}, {"description", c.description}});
          std::cout << arr.dump(2) << "\n";
        } else {
          for (const auto& c : cases) std::cout << c.id << "\t" << c.description << "\n";
        }
        return 0;
      }
      if (run->parsed()) return print_cases(o, {run_case(data, case_id, o.seed)});
      return print_cases(o, run_all(data, jobs, o.seed));
    }
    return run_op(o, op_name, values[op_name]);
  } catch (const Error& e) {
    return user_error(e.describe());
  }
}
