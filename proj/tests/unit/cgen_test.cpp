#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "../support/oracle.hpp"
#include "../support/random_programs.hpp"
#include "migron/cgen.hpp"
#include "migron/error.hpp"
#include "migron/syntax.hpp"

namespace migron {
namespace {

const Typ kDyn = Typ::unknown();

std::size_t coercion_sites(const Expr& e) {
  std::size_t n = e.kind() == ExprKind::CoerceApp ? 1 : 0;
  for (const auto& k : e.operands()) n += coercion_sites(k);
  return n;
}

CgenOutput generate(const Expr& e, FreshSupply& fresh, const TypeEnv& env = {}) {
  return cgen(env, introduce_metavars(e, fresh), fresh);
}

TEST(IntroduceMetavars, Examples) {
  FreshSupply fresh;
  EXPECT_EQ(introduce_metavars(parse("fun x. x"), fresh), Expr::fun("x", Typ::metavar({0}), Expr::var("x")));
  Expr typed = parse("fun (x:int). x");
  EXPECT_EQ(introduce_metavars(typed, fresh), typed);
  Expr nested = introduce_metavars(parse("fun x. fun y. y"), fresh);
  auto bs = binder_annotations(nested);
  ASSERT_EQ(bs.size(), 2u);
  EXPECT_EQ(bs[0].type, Typ::metavar({1}));
  EXPECT_EQ(bs[1].type, Typ::metavar({2}));
}

TEST(Cgen, ConstRule) {
  FreshSupply fresh;
  CgenOutput out = cgen({}, parse("5"), fresh);
  Typ a = Typ::metavar({0});
  EXPECT_EQ(out.typ, a);
  ASSERT_EQ(out.weights.size(), 1u);
  EXPECT_EQ(out.rewritten, Expr::coerce(SuspendedCoercion{Typ::integer(), a}, parse("5")));
  Constraint w = Constraint::weight(out.weights[0]);
  EXPECT_EQ(to_string(out.constraint),
            to_string(Constraint::conj({(Constraint::eq(a, Typ::integer()) && w) || (Constraint::eq(a, kDyn) && !w)})));
}

TEST(Cgen, FunRule) {
  FreshSupply fresh;
  CgenOutput out = generate(parse("fun x. x"), fresh);
  // α0 annotates x, α1 types the variable occurrence, α2 the function.
  Typ a0 = Typ::metavar({0}), a1 = Typ::metavar({1}), a2 = Typ::metavar({2});
  EXPECT_EQ(out.typ, a2);
  ASSERT_EQ(out.rewritten.kind(), ExprKind::CoerceApp);
  EXPECT_EQ(std::get<SuspendedCoercion>(out.rewritten.coercion_slot()),
            (SuspendedCoercion{Typ::arrow(a0, a1), a2}));
  std::string text = to_string(out.constraint);
  EXPECT_NE(text.find(to_string(Constraint::is_ground(Typ::arrow(a0, a1)))), std::string::npos) << text;
}

TEST(Cgen, NeverRejectsOnTypes) {
  for (const char* src : {"true * 1", "5 5", "if 1 then true else 2", "!3", "fst 1", "vecget(true, false)"}) {
    FreshSupply fresh;
    CgenOutput out = generate(parse(src), fresh);
    EXPECT_TRUE(testing::Oracle(out.constraint).satisfiable({})) << src;
  }
}

TEST(Cgen, UnboundVariable) {
  FreshSupply fresh;
  EXPECT_THROW(generate(parse("fun x. y"), fresh), UnboundVariable);
}

TEST(Cgen, Deterministic) {
  Expr e = parse("(fun (f:any). f true) (fun (x:any). x + 100)");
  FreshSupply f1, f2;
  CgenOutput a = generate(e, f1), b = generate(e, f2);
  EXPECT_EQ(to_string(a.constraint), to_string(b.constraint));
  EXPECT_EQ(a.rewritten, b.rewritten);
}

TEST(SoftConstraints, Examples) {
  EXPECT_TRUE(soft_constraints({}).empty());
  auto softs = soft_constraints({WeightId{0}, WeightId{1}});
  ASSERT_EQ(softs.size(), 2u);
  for (const auto& s : softs) EXPECT_EQ(s.penalty, 1u);
  EXPECT_EQ(softs[1].weight, WeightId{1});
}

TEST(Cgen, FArgWeightsMatchSites) {
  FreshSupply fresh;
  CgenOutput out = generate(parse("(fun (f:any). f true) (fun (x:any). x + 100)"), fresh);
  // Add carries two weights beyond its two operand sites; everything else pairs one weight per site.
  EXPECT_EQ(out.weights.size(), coercion_sites(out.rewritten) + 1);
  EXPECT_EQ(out.weights, constraint_weights(out.constraint));
}

struct RuleCounts {
  const char* source;
  std::size_t weights;
  std::size_t sites;
};

// Own weights and coercion sites of each rule, beyond the one of each that every variable or literal carries.
TEST(Cgen, PerRuleTables) {
  const RuleCounts rules[] = {
      {"fun z. x", 1, 1},
      {"x y", 2, 2},
      {"x * y", 3, 3},
      {"x + y", 3, 2},
      {"if x then y else z", 2, 3},
      {"let z = x in y", 0, 0},
      {"x ; y", 0, 0},
      {"fix f. x", 1, 1},
      {"ref x", 1, 1},
      {"!x", 1, 1},
      {"x := y", 2, 3},
      {"(x, y)", 1, 1},
      {"fst x", 1, 1},
      {"snd x", 1, 1},
      {"vec(x, y)", 2, 2},
      {"vecget(x, y)", 2, 2},
      {"vecset(x, y, z)", 3, 4},
      {"veclen(x)", 3, 2},
  };
  TypeEnv env = {{"x", kDyn}, {"y", kDyn}, {"z", kDyn}};
  for (const auto& r : rules) {
    Expr e = parse(r.source);
    std::size_t leaves = 0;
    std::function<void(const Expr&)> count = [&](const Expr& n) {
      if (n.kind() == ExprKind::Var || n.kind() == ExprKind::Lit) ++leaves;
      for (const auto& k : n.operands()) count(k);
    };
    count(e);
    FreshSupply fresh;
    CgenOutput out = generate(e, fresh, env);
    EXPECT_EQ(out.weights.size() - leaves, r.weights) << r.source;
    EXPECT_EQ(coercion_sites(out.rewritten) - leaves, r.sites) << r.source;
  }
}

TEST(Cgen, ErasureAndMetavarCoverage) {
  testing::Random rnd(41);
  for (int i = 0; i < 1000; ++i) {
    Expr e = rnd.program(5, true);
    FreshSupply fresh;
    Expr annotated = introduce_metavars(e, fresh);
    CgenOutput out = cgen({}, annotated, fresh);
    ASSERT_EQ(erase_coercions(out.rewritten), annotated);
    auto in_phi = constraint_metavars(out.constraint);
    std::vector<MetavarId> in_typ;
    collect_metavars(out.typ, in_typ);
    for (MetavarId m : in_typ)
      EXPECT_TRUE(std::find(in_phi.begin(), in_phi.end(), m) != in_phi.end()) << "?" << m.value;
    EXPECT_EQ(out.weights, constraint_weights(out.constraint));
  }
}

// Every well-scoped program has a model sending each metavariable to ⋆.
TEST(Cgen, DynamicModelExists) {
  testing::Random rnd(42);
  for (int i = 0; i < 1000; ++i) {
    Expr e = rnd.program(5);
    FreshSupply fresh;
    CgenOutput out = generate(e, fresh);
    std::vector<Constraint> parts;
    for (MetavarId m : fresh.metavars()) parts.push_back(Constraint::eq(Typ::metavar(m), kDyn));
    parts.push_back(out.constraint);
    ASSERT_TRUE(testing::Oracle(Constraint::conj(std::move(parts))).satisfiable({}))
        << print(e);
  }
}

}  // namespace
}  // namespace migron
