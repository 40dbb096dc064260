#pragma once

#include <vector>

#include "migron/constraint.hpp"
#include "migron/expr.hpp"
#include "migron/typecheck.hpp"

namespace migron {

// Per-run source of metavariables and weights; ids increase monotonically.
class FreshSupply {
 public:
  Typ metavar();
  WeightId weight();

  const std::vector<MetavarId>& metavars() const { return metavars_; }
  const std::vector<WeightId>& weights() const { return weights_; }

 private:
  std::vector<MetavarId> metavars_;
  std::vector<WeightId> weights_;
};

Expr introduce_metavars(const Expr& e, FreshSupply& fresh);

struct CgenOutput {
  Expr rewritten;
  Typ typ;
  Constraint constraint;
  std::vector<WeightId> weights;
};

// Never rejects on type grounds; only unbound variables are errors.
CgenOutput cgen(const TypeEnv& env, const Expr& e, FreshSupply& fresh);

struct SoftAssertion {
  WeightId weight;
  unsigned penalty = 1;
};

std::vector<SoftAssertion> soft_constraints(const std::vector<WeightId>& weights);

}  // namespace migron
