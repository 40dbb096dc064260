#include <gtest/gtest.h>

#include <functional>

#include "../support/random_programs.hpp"
#include "migron/error.hpp"
#include "migron/migrate.hpp"
#include "migron/runtime.hpp"
#include "migron/syntax.hpp"
#include "migron/typecheck.hpp"

namespace migron {
namespace {

const Typ kInt = Typ::integer();
const Typ kDyn = Typ::unknown();

std::string annotations(const Expr& e) {
  std::string out;
  for (const auto& b : binder_annotations(e)) out += b.name + ":" + to_string(b.type) + " ";
  return out;
}

// Paths to base types in negative position, following the weakening's polarity rules.
void negative_bases(const Typ& t, std::vector<PathStep>& path, bool positive, std::vector<std::vector<PathStep>>& out) {
  if (t.is_base()) {
    if (!positive) out.push_back(path);
    return;
  }
  auto go = [&](PathStep s, const Typ& child, bool pol) {
    path.push_back(s);
    negative_bases(child, path, pol, out);
    path.pop_back();
  };
  switch (t.kind()) {
    case Typ::Kind::Arrow:
      go(PathStep::ArrowIn, t.input(), !positive);
      go(PathStep::ArrowOut, t.output(), positive);
      break;
    case Typ::Kind::Ref: go(PathStep::RefContent, t.content(), positive); break;
    case Typ::Kind::Vector: go(PathStep::VectorElem, t.elem(), positive); break;
    case Typ::Kind::Pair:
      go(PathStep::PairLeft, t.left(), positive);
      go(PathStep::PairRight, t.right(), positive);
      break;
    default: break;
  }
}

TEST(PreciseMigrate, ExampleOne) {
  MigrationResult r = precise_migrate(parse("(fun id. (fun n. id true) (id 42)) (fun x. x)"));
  EXPECT_EQ(annotations(r.migrated_surface), "id:any -> any n:any x:any ");
}

TEST(PreciseMigrate, HigherOrderMultiply) {
  MigrationResult r = precise_migrate(parse("fun f. fun g. (f 1) * (g f)"));
  EXPECT_EQ(r.migrated_surface, parse("fun (f:int -> int). fun (g:(int -> int) -> int). (f 1) * (g f)"));
  EXPECT_EQ(r.weights_satisfied, r.weights_total);
  EXPECT_EQ(r.mode, MigrationMode::precise());
}

TEST(PreciseMigrate, StaticProgramUnchanged) {
  Expr e = parse("fun (x:int). x");
  for (MigrationMode mode : {MigrationMode::precise(), MigrationMode::compatible()}) {
    MigrationResult r = migrate(mode, e);
    EXPECT_EQ(r.migrated_surface, e);
    EXPECT_EQ(r.program_type, Typ::arrow(kInt, kInt));
  }
}

TEST(PreciseMigrate, OpenProgramRejected) {
  EXPECT_THROW(precise_migrate(parse("fun x. y")), UnboundVariable);
}

TEST(Weaken, Polarity) {
  Typ term = Typ::metavar({0});
  EXPECT_TRUE(weaken(kInt, term, WeakenVariant::NegBaseToDyn).operands().empty());
  EXPECT_TRUE(weaken(kDyn, term, WeakenVariant::NegBaseToDyn).operands().empty());

  Constraint c = weaken(Typ::arrow(kInt, kInt), term, WeakenVariant::NegBaseToDyn);
  ASSERT_EQ(c.operands().size(), 1u);
  const Constraint& atom = c.operands()[0];
  EXPECT_EQ(atom.kind(), Constraint::Kind::PathUnknown);
  EXPECT_EQ(atom.subject(), term);
  EXPECT_EQ(atom.path(), std::vector<PathStep>{PathStep::ArrowIn});

  // A base type under two arrow inputs is positive again.
  Typ higher = Typ::arrow(Typ::arrow(kInt, kInt), kInt);
  Constraint h = weaken(higher, term, WeakenVariant::NegBaseToDyn);
  ASSERT_EQ(h.operands().size(), 1u);
  EXPECT_EQ(h.operands()[0].path(), (std::vector<PathStep>{PathStep::ArrowIn, PathStep::ArrowOut}));

  Constraint all = weaken(higher, term, WeakenVariant::AllInputsToDyn);
  ASSERT_EQ(all.operands().size(), 1u);
  EXPECT_EQ(all.operands()[0].path(), std::vector<PathStep>{PathStep::ArrowIn});
}

TEST(Weaken, EvaluatesOnClosedModels) {
  Typ term = Typ::metavar({0});
  Constraint c = weaken(Typ::arrow(kInt, kInt), term, WeakenVariant::NegBaseToDyn);
  Model m;
  m.types[MetavarId{0}] = Typ::arrow(kDyn, kInt);
  EXPECT_TRUE(evaluate(c, m));
  m.types[MetavarId{0}] = Typ::arrow(kInt, kInt);
  EXPECT_FALSE(evaluate(c, m));
  m.types[MetavarId{0}] = kDyn;
  EXPECT_TRUE(evaluate(c, m));
}

TEST(CompatibleMigrate, NegativeBasesBecomeDynamic) {
  Expr e = parse("fun f. fun g. (f 1) * (g f)");
  MigrationResult precise = precise_migrate(e);
  MigrationResult compat = migrate(MigrationMode::compatible(), e);
  std::vector<std::vector<PathStep>> negatives;
  std::vector<PathStep> path;
  negative_bases(precise.program_type, path, true, negatives);
  ASSERT_FALSE(negatives.empty());
  for (const auto& p : negatives) {
    auto reached = follow_path(compat.program_type, p);
    if (reached) EXPECT_TRUE(reached->is_unknown()) << to_string(compat.program_type);
  }
  EXPECT_NE(compat.program_type, precise.program_type);
  EXPECT_TRUE(expr_precision(compat.migrated_surface, precise.migrated_surface));
  EXPECT_EQ(to_string(compat.mode), "compatible");
}

TEST(CompatibleMigrate, AllInputsVariant) {
  MigrationResult r =
      migrate(MigrationMode::compatible(WeakenVariant::AllInputsToDyn), parse("fun f. fun g. (f 1) * (g f)"));
  ASSERT_TRUE(r.program_type.is_arrow());
  EXPECT_TRUE(r.program_type.input().is_unknown());
  EXPECT_EQ(to_string(r.mode), "compatible/all-inputs");
}

TEST(CompatibleMigrate, IdentityStaysDynamic) {
  Expr e = parse("(fun id. (fun n. id true) (id 42)) (fun x. x)");
  EXPECT_EQ(annotations(migrate(MigrationMode::compatible(), e).migrated_surface), "id:any -> any n:any x:any ");
}

TEST(Realize, PinnedModel) {
  MigrationProblem p = make_problem(parse("fun x. x"));
  Model m;
  for (MetavarId id : p.metavars) m.types[id] = kDyn;
  for (WeightId w : p.weights) m.weights[w] = false;
  MigrationResult r = realize(p, m, MigrationMode::precise());
  EXPECT_EQ(r.migrated_surface, parse("fun x. x"));
  EXPECT_EQ(r.weights_satisfied, 0u);
  EXPECT_EQ(r.weights_total, p.weights.size());
}

// Monotone and type-precise on random programs, in both modes.
TEST(Migrate, RandomProgramProperties) {
  testing::Random rnd(51);
  for (int i = 0; i < 60; ++i) {
    Expr e = rnd.program(4);
    MigrationResult precise = migrate(MigrationMode::precise(), e);
    MigrationResult compat = migrate(MigrationMode::compatible(), e);
    for (const auto* r : {&precise, &compat}) {
      EXPECT_TRUE(expr_precision(e, r->migrated_surface)) << print(e);
      EXPECT_EQ(typecheck_coerced({}, r->migrated_coerced), r->program_type) << print(e);
      try {
        EXPECT_TRUE(type_precision(typecheck_gtlc({}, e), r->program_type)) << print(e);
      } catch (const IllTyped&) {
      }
    }
  }
}

}  // namespace
}  // namespace migron
