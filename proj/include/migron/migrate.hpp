#pragma once

#include <string>
#include <vector>

#include "migron/cgen.hpp"
#include "migron/constraint.hpp"
#include "migron/expr.hpp"
#include "migron/solver.hpp"

namespace migron {

enum class WeakenVariant : std::uint8_t { NegBaseToDyn, AllInputsToDyn };

struct MigrationMode {
  enum class Kind : std::uint8_t { Precise, Compatible };
  Kind kind = Kind::Precise;
  WeakenVariant variant = WeakenVariant::NegBaseToDyn;

  static MigrationMode precise() { return {}; }
  static MigrationMode compatible(WeakenVariant v = WeakenVariant::NegBaseToDyn) { return {Kind::Compatible, v}; }
  bool is_compatible() const { return kind == Kind::Compatible; }
  friend bool operator==(const MigrationMode&, const MigrationMode&) = default;
};

std::string to_string(MigrationMode mode);

// Phase-1 input: the program with metavariables, its constraint and type term.
struct MigrationProblem {
  Expr annotated;  // ⋆ annotations replaced by metavariables
  Expr rewritten;  // with suspended coercions
  Typ program_type;
  Constraint constraint;
  std::vector<WeightId> weights;
  std::vector<MetavarId> metavars;
};

// Throws UnboundVariable if e is not closed.
MigrationProblem make_problem(const Expr& e);

struct MigrationResult {
  Expr migrated_surface;
  Expr migrated_coerced;
  Typ program_type;
  MigrationMode mode;
  std::size_t weights_satisfied = 0;
  std::size_t weights_total = 0;
  Model model;  // normalized model of the final phase
};

// Relaxes the precise type: base types in negative position (or every input) must be ⋆ in `term`.
Constraint weaken(const Typ& precise, const Typ& term, WeakenVariant variant);

MigrationResult precise_migrate(const Expr& e, const SolverOptions& options = default_solver_options());
MigrationResult migrate(MigrationMode mode, const Expr& e, const SolverOptions& options = default_solver_options());

// Substitutes a model into a problem; shared by both phases and by tests that pin models.
MigrationResult realize(const MigrationProblem& problem, const Model& model, MigrationMode mode);

}  // namespace migron
