#pragma once

// Point transformations between jet spaces.  Source and target share
// coordinate names: the target of u is again u, read in the new variables.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "potsym/conslaw.hpp"

namespace potsym {

struct CoordinateMap {
  Expr t, x;
  std::map<int, Expr> u;  // by dependent id
};

class PointTransformation {
 public:
  PointTransformation() = default;

  // Checks that the Jacobian does not vanish (SingularJacobian) and that the
  // inverse undoes the forward map at random sample points (BadInverse).
  static PointTransformation create(Context& ctx, std::string name, CoordinateMap forward, CoordinateMap inverse,
                                    std::uint64_t seed = 1);

  Context& context() const { return *ctx_; }
  const std::string& name() const { return name_; }
  const CoordinateMap& forward() const { return fwd_; }
  const CoordinateMap& inverse() const { return inv_; }
  std::vector<int> dependents() const;

  // D_t t~ D_x x~ - D_x t~ D_t x~ in source variables.
  const Expr& jacobian() const { return jacobian_; }

  // Target jet coordinate of a mapped dependent written on the source jet
  // space.
  Expr prolonged(int dependent, DerivIndex k) const;

  // e(target coordinates) composed with the transformation, on the source
  // jet space.  Parameter functions of the target become pulled-back
  // functions of the source; new ones are added to params.
  Expr pull_back(const Expr& e, ParamTable& params) const;
  // The converse: e on the source jet space rewritten in target coordinates.
  Expr push_forward(const Expr& e, ParamTable& params) const;

  PointTransformation inverted() const;
  // The same map extended by the identity on the given potentials.  Throws
  // NameCollision if one is already mapped.
  PointTransformation extended(const std::vector<int>& potentials) const;

  // Recorded domain restrictions, e.g. "t > 0" for log-based inverses.
  const std::vector<std::string>& domain_notes() const { return notes_; }

 private:
  struct Side;
  AtomMap map_params(const Expr& e, ParamTable& params, bool forward) const;
  Expr image_base(int dependent, bool forward) const;

  Context* ctx_ = nullptr;
  std::string name_;
  CoordinateMap fwd_, inv_;
  Expr jacobian_;
  std::vector<std::string> notes_;
  std::shared_ptr<Side> to_target_, to_source_;
  // param id -> image id, in each direction
  std::shared_ptr<std::map<int, int>> pushed_, pulled_;
};

// Exact multiplier matrix: row mu, column nu with
//   pull_back(target equation mu) = sum_nu Lambda(mu, nu) * (source equation nu)
// on the whole jet space.  Throws MapMismatch.
using Multiplier = std::vector<std::vector<Expr>>;
Multiplier compute_multiplier(const PointTransformation& g, const PDESystem& source, const PDESystem& target,
                              ParamTable& params);

// (T^g, X^g) rewritten in target variables and reduced on the target.
// Throws MapMismatch if g does not map source to target.
ConservedVector transform_conserved_vector(const ConservedVector& cv, const PointTransformation& g,
                                           const PDESystem& source, const PDESystem& target, ParamTable& params);

// lambda^mu = sum_nu Lambda(nu, mu) J (pulled-back lambda~^nu), reduced on the
// source.
Characteristic transform_characteristic(const Characteristic& target_char, const PointTransformation& g,
                                        const Multiplier& lambda, const PDESystem& source, ParamTable& params);

VectorField push_forward_vector_field(const VectorField& q, const PointTransformation& g, ParamTable& params);

PointTransformation prolong_to_potential(const PointTransformation& g, const std::vector<int>& potentials);

}  // namespace potsym
