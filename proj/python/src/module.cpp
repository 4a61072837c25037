#include <memory>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "potsym/catalog.hpp"

namespace py = pybind11;
using namespace potsym;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

// A document together with the context its expressions live in.
class Session {
 public:
  explicit Session(const std::string& defs) : ctx_(std::make_unique<Context>()), doc_(*ctx_) {
    if (!defs.empty()) load(defs);
  }
  void load(const std::string& defs) { parse_into(doc_, defs); }
  py::object run(const std::string& op, const Args& args) { return to_python(run_operation(doc_, op, args).to_json()); }
  std::string expr(const std::string& text) const { return parse_expr(text, doc_).str(); }
  std::string field(const std::string& text) const { return parse_vector_field(text, doc_).str(); }
  py::dict names() const {
    py::dict d;
    d["systems"] = doc_.system_names();
    d["conserved_vectors"] = doc_.cv_names();
    d["transforms"] = doc_.transform_names();
    d["fields"] = doc_.field_names();
    d["params"] = doc_.param_names();
    return d;
  }

 private:
  std::unique_ptr<Context> ctx_;
  Document doc_;
};

}  // namespace

PYBIND11_MODULE(_potsym, m) {
  m.doc() = "Conservation laws and potential symmetries of 1+1 dimensional PDEs";

  // Messages start with the error kind, e.g. "UnknownSymbol: ...".
  static py::handle error = py::exception<Error>(m, "PotsymError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), (std::string(to_string(e.kind())) + ": " + e.describe()).c_str());
    }
  });

  py::class_<Session>(m, "Session")
      .def(py::init<const std::string&>(), py::arg("defs") = "")
      .def("load", &Session::load, py::arg("defs"))
      .def("run", &Session::run, py::arg("operation"), py::arg("args") = Args{})
      .def("expr", &Session::expr, py::arg("text"), "Canonical form of an expression")
      .def("field", &Session::field, py::arg("text"), "Canonical form of a vector field")
      .def("names", &Session::names);

  m.def("operations", [] {
    py::list out;
    for (const auto& op : operations()) {
      py::dict d;
      d["name"] = op.name;
      d["required"] = op.required;
      d["optional"] = op.optional;
      d["summary"] = op.summary;
      out.append(d);
    }
    return out;
  });
  m.def("default_catalog_dir", &default_catalog_dir);
  m.def(
      "list_cases",
      [](const std::filesystem::path& dir) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& c : list_cases(dir)) out.emplace_back(c.id, c.description);
        return out;
      },
      py::arg("directory"));
  m.def(
      "run_case",
      [](const std::filesystem::path& dir, const std::string& id, std::uint64_t seed) {
        CaseReport r;
        {
          py::gil_scoped_release release;
          r = run_case(dir, id, seed);
        }
        return to_python(r.to_json());
      },
      py::arg("directory"), py::arg("id"), py::arg("seed") = 1);
  m.def(
      "run_all",
      [](const std::filesystem::path& dir, unsigned jobs, std::uint64_t seed) {
        std::vector<CaseReport> rs;
        {
          py::gil_scoped_release release;
          rs = run_all(dir, jobs, seed);
        }
        py::list out;
        for (const auto& r : rs) out.append(to_python(r.to_json()));
        return out;
      },
      py::arg("directory"), py::arg("jobs") = 1, py::arg("seed") = 1);
}
