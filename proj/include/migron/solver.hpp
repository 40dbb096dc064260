#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "migron/cgen.hpp"
#include "migron/constraint.hpp"
#include "migron/expr.hpp"
#include "migron/sexpr.hpp"

namespace migron {

struct SolverOptions {
  std::string executable = "z3";
  std::vector<std::string> arguments = {"-in"};
  unsigned random_seed = 0;
  std::chrono::milliseconds timeout{10'000};
  // Receives the full SMT-LIB transcript when a session closes.
  std::function<void(const std::string&)> on_transcript;
};

// z3 from PATH unless MIGRON_SOLVER names another executable.
SolverOptions default_solver_options();

std::string encode(const Typ& t);
std::string encode(const Constraint& c);
std::string metavar_symbol(MetavarId id);
std::string weight_symbol(WeightId id);

// One child solver process speaking SMT-LIB 2 over pipes, strictly request/reply.
class SolverSession {
 public:
  explicit SolverSession(SolverOptions options = default_solver_options());
  ~SolverSession();
  SolverSession(const SolverSession&) = delete;
  SolverSession& operator=(const SolverSession&) = delete;

  void declare_typ_datatype();
  void declare_metavar(MetavarId id);
  void declare_weight(WeightId id);
  void assert_constraint(const Constraint& c);
  void assert_soft(const SoftAssertion& soft);

  enum class Status { Sat, Unsat };
  Status check_sat();
  // Values for the requested symbols; unmentioned metavariables default to ⋆, weights to false.
  Model get_model(const std::vector<MetavarId>& metavars, const std::vector<WeightId>& weights);

  // Sends one command and returns the reply; `(error ...)` replies throw SolverProtocolError.
  SExpr command(const std::string& text, std::chrono::milliseconds budget = std::chrono::milliseconds{5000});

  // Everything sent so far.
  const std::string& script() const { return script_; }
  const SolverOptions& options() const { return options_; }

 private:
  SExpr read_reply(std::chrono::milliseconds budget);
  void expect_success(const std::string& text);
  void terminate();

  SolverOptions options_;
  int pid_ = -1;
  int to_solver_ = -1;
  int from_solver_ = -1;
  std::string buffer_;
  std::string script_;
  std::set<std::string> declared_;
};

Typ decode_typ(const SExpr& term);

// Declares the Typ datatype and one constant per metavariable and weight.
void declare_problem(SolverSession& session, const std::vector<MetavarId>& metavars,
                     const std::vector<WeightId>& weights);

// Asserts, soft-asserts, solves; nullopt means unsat.
std::optional<Model> solve(SolverSession& session, const Constraint& constraint,
                           const std::vector<SoftAssertion>& softs, const std::vector<MetavarId>& metavars);

// Maps metavariables the constraint leaves unconstrained to ⋆, keeping the weight assignment.
// Returns the input model unchanged if the normalized one would not satisfy the constraint.
Model normalize_model(const Constraint& constraint, const Model& raw, const std::vector<MetavarId>& metavars);

Typ subst(const Model& model, const Typ& t);
// Closes annotations and resolves suspended coercions, dropping identities.
Expr subst(const Model& model, const Expr& e);

}  // namespace migron
