#include "potsym/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace potsym {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::Published: return "published";
    case Origin::Derived: return "derived";
    case Origin::Trivial: return "trivial";
  }
  return "derived";
}

fs::path default_catalog_dir() {
  if (const char* env = std::getenv("POTSYM_CATALOG_DIR"); env && *env) return env;
  return POTSYM_CATALOG_DIR;
}

namespace {

[[noreturn]] void bad(int line, const std::string& msg) {
  throw Error(ErrorKind::InvalidArgument, msg, SourceLocation{line, 1});
}

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

// key=value tokens; values may be double-quoted.
std::vector<std::pair<std::string, std::string>> key_values(const std::string& s, int line) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    std::size_t eq = s.find('=', i);
    std::size_t sp = s.find_first_of(" \t", i);
    if (eq == std::string::npos || (sp != std::string::npos && sp < eq)) bad(line, "expected key=value in check");
    std::string key = s.substr(i, eq - i);
    i = eq + 1;
    std::string value;
    if (i < s.size() && s[i] == '"') {
      std::size_t close = s.find('"', i + 1);
      if (close == std::string::npos) bad(line, "unterminated quote in check");
      value = s.substr(i + 1, close - i - 1);
      i = close + 1;
    } else {
      std::size_t end = s.find_first_of(" \t", i);
      if (end == std::string::npos) end = s.size();
      value = s.substr(i, end - i);
      i = end;
    }
    out.emplace_back(key, value);
  }
  return out;
}

std::optional<ErrorKind> error_kind(const std::string& name) {
  for (int k = 0; k <= static_cast<int>(ErrorKind::InvalidArgument); ++k)
    if (to_string(static_cast<ErrorKind>(k)) == name) return static_cast<ErrorKind>(k);
  return std::nullopt;
}

Check parse_check(const std::string& body, int line) {
  std::size_t arrow = body.find("=>");
  if (arrow == std::string::npos) bad(line, "check without '=>'");
  std::string lhs = trim(body.substr(0, arrow)), rhs = trim(body.substr(arrow + 2));
  Check c;
  c.line = line;
  std::size_t sp = lhs.find_first_of(" \t");
  c.operation = lhs.substr(0, sp);
  bool have_origin = false;
  if (sp != std::string::npos) {
    for (auto& [k, v] : key_values(lhs.substr(sp), line)) {
      if (k == "origin") {
        have_origin = true;
        if (v == "published") c.origin = Origin::Published;
        else if (v == "derived") c.origin = Origin::Derived;
        else if (v == "trivial") c.origin = Origin::Trivial;
        else bad(line, "unknown origin " + v);
      } else if (k == "oracle") {
        c.oracle = v;
      } else {
        c.args[k] = v;
      }
    }
  }
  if (!have_origin) bad(line, "check without origin");
  if (c.origin == Origin::Derived && c.oracle.empty()) bad(line, "derived expectation without oracle");

  std::size_t end = rhs.find_first_of(" \t");
  std::string outcome = rhs.substr(0, end);
  std::string rest = end == std::string::npos ? "" : trim(rhs.substr(end));
  if (outcome == "verified") c.expected = Status::Verified;
  else if (outcome == "failed") c.expected = Status::Failed;
  else if (outcome.starts_with("error:")) {
    c.expected = Status::Error;
    c.expected_error = error_kind(outcome.substr(6));
    if (!c.expected_error) bad(line, "unknown error kind " + outcome.substr(6));
  } else {
    bad(line, "unknown outcome " + outcome);
  }
  if (!rest.empty()) {
    if (rest[0] != ':') bad(line, "expected ':' before expected values");
    c.expected_values = trim(rest.substr(1));
  }
  return c;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(trim(part));
  return out;
}

// Empty string on agreement.
std::string compare(const Check& c, const Report& r, const Document& doc) {
  if (r.status != c.expected) {
    std::string got(to_string(r.status));
    if (r.error) got += " (" + r.error->describe() + ")";
    return "expected " + std::string(to_string(c.expected)) + ", got " + got;
  }
  if (c.expected_error && r.error && r.error->kind() != *c.expected_error)
    return "expected error " + std::string(to_string(*c.expected_error)) + ", got " + r.error->describe();
  if (!c.expected_values) return "";
  try {
    if (r.field) {
      VectorField want = parse_vector_field(*c.expected_values, doc);
      if (!want.equals(*r.field)) return "expected field " + want.str() + ", got " + r.field->str();
      return "";
    }
    const std::vector<Expr>& got = r.values.empty() ? r.residuals : r.values;
    std::vector<std::string> parts = split(*c.expected_values, ';');
    if (parts.size() != got.size())
      return "expected " + std::to_string(parts.size()) + " values, got " + std::to_string(got.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
      Expr want = parse_expr(parts[i], doc);
      if (!want.equals(got[i])) return "value " + std::to_string(i + 1) + ": expected " + want.str() + ", got " + got[i].str();
    }
  } catch (const Error& e) {
    return "bad expectation: " + e.describe();
  }
  return "";
}

}  // namespace

CatalogCase parse_case(const std::string& id, const std::string& text) {
  CatalogCase c;
  c.id = id;
  c.source = text;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::string pending;
  int pending_line = 0;
  auto flush = [&] {
    std::string d = trim(pending);
    pending.clear();
    if (d.starts_with("description:")) c.description = trim(d.substr(12));
    else if (d.starts_with("check ")) c.checks.push_back(parse_check(d.substr(6), pending_line));
    else if (!d.empty()) bad(pending_line, "unknown directive");
  };
  while (std::getline(in, raw)) {
    ++line;
    bool continued = !pending.empty();
    if (!raw.starts_with("#@")) {
      if (continued) bad(line, "dangling continuation");
      continue;
    }
    std::string body = raw.substr(2);
    if (!continued) pending_line = line;
    std::string t = trim(body);
    if (!t.empty() && t.back() == '\\') {
      t.pop_back();
      pending += t + " ";
      continue;
    }
    pending += t;
    flush();
  }
  if (!pending.empty()) flush();
  return c;
}

std::vector<CaseInfo> list_cases(const fs::path& dir) {
  std::vector<CaseInfo> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".defs") continue;
    std::string id = entry.path().stem().string();
    std::string desc;
    std::istringstream in(read_file(entry.path()));
    std::string line;
    while (std::getline(in, line))
      if (line.starts_with("#@") && trim(line.substr(2)).starts_with("description:")) {
        desc = trim(trim(line.substr(2)).substr(12));
        break;
      }
    out.push_back({id, desc});
  }
  std::sort(out.begin(), out.end(), [](const CaseInfo& a, const CaseInfo& b) { return a.id < b.id; });
  return out;
}

CatalogCase load_case(const fs::path& dir, const std::string& id) {
  fs::path p = dir / (id + ".defs");
  if (id.empty() || id.find('/') != std::string::npos || !fs::is_regular_file(p))
    throw Error(ErrorKind::UnknownCase, "no catalog case " + id + " in " + dir.string());
  return parse_case(id, read_file(p));
}

CaseReport run_case(const CatalogCase& c, std::uint64_t seed) {
  CaseReport rep;
  rep.id = c.id;
  rep.description = c.description;
  auto start = std::chrono::steady_clock::now();
  rep.context = std::make_shared<Context>();
  Document doc(*rep.context);
  doc.seed = seed;
  try {
    parse_into(doc, c.source);
  } catch (const Error& e) {
    rep.error = e;
  }
  if (!rep.error) {
    for (const Check& check : c.checks) {
      CheckResult r{check, run_operation(doc, check.operation, check.args), false, ""};
      r.mismatch = compare(check, r.report, doc);
      r.passed = r.mismatch.empty();
      rep.checks.push_back(std::move(r));
    }
  }
  rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

CaseReport run_case(const fs::path& dir, const std::string& id, std::uint64_t seed) {
  return run_case(load_case(dir, id), seed);
}

std::vector<CaseReport> run_all(const fs::path& dir, unsigned jobs, std::uint64_t seed) {
  std::vector<CaseInfo> cases = list_cases(dir);
  std::vector<CaseReport> out(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < cases.size();) {
      try {
        out[i] = run_case(dir, cases[i].id, seed);
      } catch (const Error& e) {
        out[i].id = cases[i].id;
        out[i].error = e;
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(cases.size(), 1))));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

bool CaseReport::passed() const {
  return !error && std::all_of(checks.begin(), checks.end(), [](const CheckResult& r) { return r.passed; });
}

std::size_t CaseReport::passed_count() const {
  return std::count_if(checks.begin(), checks.end(), [](const CheckResult& r) { return r.passed; });
}

json CaseReport::to_json() const {
  json j{{"id", id}, {"description", description}, {"passed", passed()}, {"timing_ms", millis}};
  if (error) j["error"] = {{"kind", std::string(potsym::to_string(error->kind()))}, {"message", error->describe()}};
  json arr = json::array();
  for (const auto& r : checks) {
    json c{{"line", r.check.line},
           {"operation", r.check.operation},
           {"args", r.check.args},
           {"origin", std::string(potsym::to_string(r.check.origin))},
           {"expected", std::string(potsym::to_string(r.check.expected))},
           {"passed", r.passed},
           {"report", r.report.to_json()}};
    if (!r.check.oracle.empty()) c["oracle"] = r.check.oracle;
    if (!r.passed) c["mismatch"] = r.mismatch;
    arr.push_back(std::move(c));
  }
  j["checks"] = arr;
  return j;
}

std::string CaseReport::to_text() const {
  std::ostringstream out;
  out << (passed() ? "PASS " : "FAIL ") << id << " (" << passed_count() << "/" << checks.size() << " checks)\n";
  if (error) out << "  " << error->describe() << "\n";
  for (const auto& r : checks) {
    if (r.passed) continue;
    out << "  line " << r.check.line << " " << r.check.operation << ": " << r.mismatch << "\n";
  }
  return out.str();
}

}  // namespace potsym
