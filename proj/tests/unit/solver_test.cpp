#include <gtest/gtest.h>

#include "../support/oracle.hpp"
#include "migron/cgen.hpp"
#include "migron/error.hpp"
#include "migron/solver.hpp"
#include "migron/syntax.hpp"

namespace migron {
namespace {

const Typ kInt = Typ::integer();
const Typ kDyn = Typ::unknown();
const Typ a0 = Typ::metavar({0});
const Typ a1 = Typ::metavar({1});

TEST(Encode, Types) {
  EXPECT_EQ(encode(Typ::arrow(kDyn, kInt)), "(arr star int)");
  EXPECT_EQ(encode(Typ::pair(Typ::ref(Typ::boolean()), Typ::vector(Typ::string()))), "(pair (ref bool) (vec str))");
  EXPECT_EQ(encode(a1), "a1");
  EXPECT_EQ(weight_symbol(WeightId{3}), "w3");
}

TEST(Encode, Constraints) {
  Constraint w = Constraint::weight(WeightId{0});
  EXPECT_EQ(encode(Constraint::eq(a0, kInt) && w), "(and (= a0 int) w0)");
  EXPECT_EQ(encode(!w), "(not w0)");
  EXPECT_EQ(encode(Constraint::truth()), "true");
  EXPECT_EQ(encode(Constraint::disj({})), "false");
}

TEST(Session, AcceptsDeclarations) {
  SolverSession s;
  s.declare_typ_datatype();
  EXPECT_NO_THROW(s.command("(declare-const a Typ)"));
}

TEST(Session, DoubleDeclarationIsProtocolError) {
  SolverSession s;
  s.declare_typ_datatype();
  s.declare_metavar(MetavarId{0});
  EXPECT_THROW(s.declare_metavar(MetavarId{0}), SolverProtocolError);
}

TEST(Session, MissingSolverIsReported) {
  SolverOptions o;
  o.executable = "/nonexistent/solver";
  EXPECT_THROW(
      {
        SolverSession s(o);
        s.declare_typ_datatype();
      },
      SolverError);
}

TEST(Solve, ArrowEquation) {
  SolverSession s;
  declare_problem(s, {MetavarId{0}, MetavarId{1}}, {});
  Constraint phi = Constraint::eq(Typ::arrow(a0, kInt), a1);
  auto raw = solve(s, phi, {}, {MetavarId{0}, MetavarId{1}});
  ASSERT_TRUE(raw);
  Typ beta = subst(*raw, a1);
  ASSERT_TRUE(beta.is_arrow());
  EXPECT_EQ(beta.output(), kInt);
  Model normal = normalize_model(phi, *raw, {MetavarId{0}, MetavarId{1}});
  EXPECT_EQ(subst(normal, a1), Typ::arrow(kDyn, kInt));
  EXPECT_TRUE(evaluate(phi, normal));
}

TEST(Solve, Contradiction) {
  SolverSession s;
  declare_problem(s, {}, {WeightId{0}});
  Constraint w = Constraint::weight(WeightId{0});
  EXPECT_FALSE(solve(s, w && !w, soft_constraints({WeightId{0}}), {}));
}

TEST(Solve, MaximizesSoftWeights) {
  FreshSupply fresh;
  Expr e = introduce_metavars(parse("fun f. fun g. (f 1) * (g f)"), fresh);
  CgenOutput out = cgen({}, e, fresh);
  SolverSession s;
  declare_problem(s, fresh.metavars(), out.weights);
  auto raw = solve(s, out.constraint, soft_constraints(out.weights), fresh.metavars());
  ASSERT_TRUE(raw);
  EXPECT_TRUE(evaluate(out.constraint, *raw));
  Model m = normalize_model(out.constraint, *raw, fresh.metavars());
  EXPECT_TRUE(evaluate(out.constraint, m));
  EXPECT_EQ(m.weights, raw->weights);
  EXPECT_EQ(m.satisfied(out.weights), out.weights.size());
}

TEST(Solve, TranscriptHasScriptLayout) {
  std::string transcript;
  SolverOptions o = default_solver_options();
  o.on_transcript = [&](const std::string& t) { transcript = t; };
  {
    SolverSession s(o);
    declare_problem(s, {MetavarId{0}}, {WeightId{0}});
    Constraint phi = (Constraint::eq(a0, kInt) && Constraint::weight(WeightId{0})) || Constraint::eq(a0, kDyn);
    ASSERT_TRUE(solve(s, phi, soft_constraints({WeightId{0}}), {MetavarId{0}}));
  }
  auto at = [&](const std::string& needle) { return transcript.find(needle); };
  ASSERT_NE(at("(declare-datatypes"), std::string::npos);
  EXPECT_LT(at("(declare-datatypes"), at("(declare-const a0 Typ)"));
  EXPECT_LT(at("(declare-const a0 Typ)"), at("(assert "));
  EXPECT_LT(at("(assert "), at("(assert-soft w0 :weight 1)"));
  EXPECT_LT(at("(assert-soft w0 :weight 1)"), at("(check-sat)"));
  EXPECT_LT(at("(check-sat)"), at("(get-model)"));
}

TEST(Decode, Terms) {
  EXPECT_EQ(decode_typ(parse_sexpr("(arr star (ref int))")), Typ::arrow(kDyn, Typ::ref(kInt)));
  EXPECT_EQ(decode_typ(parse_sexpr("(pair bool (vec unit))")), Typ::pair(Typ::boolean(), Typ::vector(Typ::unit())));
  EXPECT_THROW(decode_typ(parse_sexpr("(arr star)")), SolverProtocolError);
  EXPECT_EQ(decode_typ(parse_sexpr("(let ((a!1 (ref (arr star bool)))) (arr a!1 a!1))")),
            Typ::arrow(Typ::ref(Typ::arrow(kDyn, Typ::boolean())), Typ::ref(Typ::arrow(kDyn, Typ::boolean()))));
  EXPECT_EQ(decode_typ(parse_sexpr("(let ((a!1 int)) (let ((a!2 (vec a!1))) (pair a!2 a!1)))")),
            Typ::pair(Typ::vector(kInt), kInt));
}

TEST(Subst, Types) {
  Model m;
  m.types[MetavarId{0}] = kInt;
  EXPECT_EQ(subst(m, Typ::arrow(a0, a0)), Typ::arrow(kInt, kInt));
  EXPECT_THROW(subst(m, a1), MissingAssignment);
  Typ once = subst(m, Typ::pair(a0, kDyn));
  EXPECT_EQ(subst(m, once), once);
}

TEST(Subst, DropsIdentityCoercions) {
  Model m;
  m.types[MetavarId{0}] = kInt;
  Expr lit = Expr::lit(std::int64_t{5});
  EXPECT_EQ(subst(m, Expr::coerce(SuspendedCoercion{kInt, a0}, lit)), lit);
  m.types[MetavarId{0}] = kDyn;
  Expr tagged = subst(m, Expr::coerce(SuspendedCoercion{kInt, a0}, lit));
  ASSERT_EQ(tagged.kind(), ExprKind::CoerceApp);
  EXPECT_EQ(tagged.coercion(), Coercion::tag(GroundTy::Int));
}

TEST(Subst, LiteralThroughSolver) {
  FreshSupply fresh;
  CgenOutput out = cgen({}, parse("5"), fresh);
  SolverSession s;
  declare_problem(s, fresh.metavars(), out.weights);
  auto raw = solve(s, out.constraint, soft_constraints(out.weights), fresh.metavars());
  ASSERT_TRUE(raw);
  Model m = normalize_model(out.constraint, *raw, fresh.metavars());
  EXPECT_EQ(subst(m, out.rewritten), parse("5"));
  EXPECT_EQ(subst(m, out.typ), kInt);
}

TEST(Normalize, FreeMetavarsBecomeDynamic) {
  Model raw;
  raw.types[MetavarId{0}] = Typ::arrow(Typ::string(), kInt);
  raw.types[MetavarId{1}] = Typ::string();
  Constraint phi = Constraint::eq(a0, Typ::arrow(a1, kInt)) || Constraint::eq(a0, kDyn);
  Model m = normalize_model(phi, raw, {MetavarId{0}, MetavarId{1}});
  EXPECT_EQ(m.types[MetavarId{0}], Typ::arrow(kDyn, kInt));
  EXPECT_EQ(m.types[MetavarId{1}], kDyn);
}

TEST(Normalize, KeepsRawModelWhenClosureFails) {
  // IsGround(a0) admits only ground shapes, so closing a0 := ⋆ would violate it.
  Model raw;
  raw.types[MetavarId{0}] = kInt;
  Constraint phi = Constraint::is_ground(a0);
  Model m = normalize_model(phi, raw, {MetavarId{0}});
  EXPECT_TRUE(evaluate(phi, m));
  EXPECT_EQ(m.types[MetavarId{0}], kInt);
}

}  // namespace
}  // namespace migron
