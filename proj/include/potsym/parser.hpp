#pragma once

// The declaration language:
//
//   param alpha(t, x) with alpha_t = x*alpha_x - alpha_xx;
//   system FP { u_t = u_xx + x*u_x + u; }
//   cv FP1 = (u, -u_x - x*u) on FP;
//   transform T { t~ = exp(2*t)/2; x~ = exp(t)*x; u~ = exp(-t)*u;
//                 inverse { t = log(2*t)/2; x = x*exp(-log(2*t)/2); u = u*exp(log(2*t)/2); } }
//   vf G = exp(-t)*dx;
//
// '#' starts a comment running to the end of the line.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "potsym/conslaw.hpp"
#include "potsym/transform.hpp"

namespace potsym {

struct NamedCV {
  std::string name;
  ConservedVector cv;
  std::optional<std::string> system;
  SourceLocation where;
};

struct NamedField {
  std::string name;
  VectorField field;
  SourceLocation where;
};

class Document {
 public:
  explicit Document(Context& ctx) : ctx_(&ctx) {}

  Context& context() const { return *ctx_; }
  bool empty() const { return params.empty() && systems_.empty() && cvs_.empty() && transforms_.empty() && fields_.empty(); }

  // Lookups throw UnknownSymbol.
  const PDESystem& system(const std::string& name) const;
  const NamedCV& cv(const std::string& name) const;
  const PointTransformation& transform(const std::string& name) const;
  const NamedField& field(const std::string& name) const;
  const ParamFunction& param(const std::string& name) const;

  const std::vector<std::string>& system_names() const { return system_order_; }
  const std::vector<std::string>& cv_names() const { return cv_order_; }
  const std::vector<std::string>& transform_names() const { return transform_order_; }
  const std::vector<std::string>& field_names() const { return field_order_; }
  const std::vector<std::string>& param_names() const { return param_order_; }
  bool has_dependent(const std::string& name) const { return dependents_.count(name) > 0; }
  bool has_system(const std::string& name) const { return systems_.count(name) > 0; }

  void add_system(PDESystem sys);
  void add_cv(NamedCV cv);
  void add_transform(PointTransformation g);
  void add_field(NamedField f);
  void add_param(ParamFunction p);
  void declare_dependent(const std::string& name);

  // Parameter functions by id, including those created by transformations.
  ParamTable params;
  // Seeds the numeric inverse check of transformations.
  std::uint64_t seed = 1;

 private:
  Context* ctx_;
  std::map<std::string, PDESystem> systems_;
  std::map<std::string, NamedCV> cvs_;
  std::map<std::string, PointTransformation> transforms_;
  std::map<std::string, NamedField> fields_;
  std::map<std::string, int> param_ids_;
  std::vector<std::string> system_order_, cv_order_, transform_order_, field_order_, param_order_;
  std::set<std::string> dependents_;
};

// Parses one expression against the symbols already declared in scope.
Expr parse_expr(const std::string& text, const Document& scope);

// A vector-field expression in dt, dx, du, ... markers.
VectorField parse_vector_field(const std::string& text, const Document& scope);

// Appends the declarations of text to doc.
void parse_into(Document& doc, const std::string& text);
Document parse_document(Context& ctx, const std::string& text);

}  // namespace potsym
