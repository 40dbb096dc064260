#include "migron/migrate.hpp"

#include "migron/error.hpp"

namespace migron {

std::string to_string(MigrationMode mode) {
  if (!mode.is_compatible()) return "precise";
  return mode.variant == WeakenVariant::NegBaseToDyn ? "compatible" : "compatible/all-inputs";
}

MigrationProblem make_problem(const Expr& e) {
  if (auto fv = free_vars(e); !fv.empty()) throw UnboundVariable(fv.front());
  FreshSupply fresh;
  MigrationProblem p;
  p.annotated = introduce_metavars(e, fresh);
  CgenOutput out = cgen({}, p.annotated, fresh);
  p.rewritten = std::move(out.rewritten);
  p.program_type = std::move(out.typ);
  p.constraint = std::move(out.constraint);
  p.weights = std::move(out.weights);
  p.metavars = fresh.metavars();
  return p;
}

namespace {

void polarize(const Typ& precise, std::vector<PathStep>& path, bool positive, WeakenVariant variant,
              const Typ& term, std::vector<Constraint>& out) {
  switch (precise.kind()) {
    case Typ::Kind::Unknown:
    case Typ::Kind::Metavar: return;
    case Typ::Kind::Base:
      if (!positive) out.push_back(Constraint::path_unknown(term, path));
      return;
    case Typ::Kind::Arrow:
      path.push_back(PathStep::ArrowIn);
      if (variant == WeakenVariant::AllInputsToDyn) {
        out.push_back(Constraint::path_unknown(term, path));
      } else {
        polarize(precise.input(), path, !positive, variant, term, out);
      }
      path.back() = PathStep::ArrowOut;
      polarize(precise.output(), path, positive, variant, term, out);
      path.pop_back();
      return;
    case Typ::Kind::Ref:
      path.push_back(PathStep::RefContent);
      polarize(precise.content(), path, positive, variant, term, out);
      path.pop_back();
      return;
    case Typ::Kind::Vector:
      path.push_back(PathStep::VectorElem);
      polarize(precise.elem(), path, positive, variant, term, out);
      path.pop_back();
      return;
    case Typ::Kind::Pair:
      path.push_back(PathStep::PairLeft);
      polarize(precise.left(), path, positive, variant, term, out);
      path.back() = PathStep::PairRight;
      polarize(precise.right(), path, positive, variant, term, out);
      path.pop_back();
      return;
  }
}

Model solve_phase(const MigrationProblem& p, const Constraint& phi, const SolverOptions& options) {
  SolverSession session(options);
  declare_problem(session, p.metavars, p.weights);
  auto raw = solve(session, phi, soft_constraints(p.weights), p.metavars);
  if (!raw) throw InternalError("solver reports unsat for a constraint that always has a dynamic model");
  Model m = normalize_model(phi, *raw, p.metavars);
  if (!evaluate(phi, m)) throw InternalError("solver model does not satisfy the constraint");
  return m;
}

bool fully_dynamic(const Expr& e) {
  for (const auto& b : binder_annotations(e))
    if (!b.type.is_unknown()) return false;
  return true;
}

// Programmer-written annotations can pin a negative position to a base type; such atoms are dropped.
Constraint admissible(const MigrationProblem& p, const Constraint& relaxed, const SolverOptions& options) {
  SolverSession session(options);
  declare_problem(session, p.metavars, p.weights);
  session.assert_constraint(p.constraint);
  std::vector<Constraint> kept;
  for (const auto& atom : relaxed.operands()) {
    session.command("(push 1)");
    session.assert_constraint(atom);
    if (session.check_sat() == SolverSession::Status::Sat) {
      kept.push_back(atom);
    } else {
      session.command("(pop 1)");
    }
  }
  return Constraint::conj(std::move(kept));
}

}  // namespace

Constraint weaken(const Typ& precise, const Typ& term, WeakenVariant variant) {
  std::vector<Constraint> parts;
  std::vector<PathStep> path;
  polarize(precise, path, true, variant, term, parts);
  return Constraint::conj(std::move(parts));
}

MigrationResult realize(const MigrationProblem& problem, const Model& model, MigrationMode mode) {
  MigrationResult r;
  r.migrated_coerced = subst(model, problem.rewritten);
  r.migrated_surface = erase_coercions(r.migrated_coerced);
  r.program_type = subst(model, problem.program_type);
  r.mode = mode;
  r.weights_satisfied = model.satisfied(problem.weights);
  r.weights_total = problem.weights.size();
  r.model = model;
  return r;
}

MigrationResult precise_migrate(const Expr& e, const SolverOptions& options) {
  return migrate(MigrationMode::precise(), e, options);
}

MigrationResult migrate(MigrationMode mode, const Expr& e, const SolverOptions& options) {
  MigrationProblem p = make_problem(e);
  Model first = solve_phase(p, p.constraint, options);
  if (!mode.is_compatible()) return realize(p, first, mode);
  Typ precise = subst(first, p.program_type);
  Constraint relaxed = weaken(precise, p.program_type, mode.variant);
  if (!fully_dynamic(e)) relaxed = admissible(p, relaxed, options);
  Model second = solve_phase(p, p.constraint && relaxed, options);
  return realize(p, second, mode);
}

}  // namespace migron
