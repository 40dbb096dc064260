#include <gtest/gtest.h>

#include "../support/random_programs.hpp"
#include "migron/error.hpp"
#include "migron/interp.hpp"
#include "migron/runtime.hpp"
#include "migron/syntax.hpp"

namespace migron {
namespace {

const Typ kInt = Typ::integer();
const Typ kBool = Typ::boolean();
const Typ kDyn = Typ::unknown();

Expr num(std::int64_t n) { return Expr::lit(n); }

TEST(Coerce, Examples) {
  EXPECT_EQ(coerce(kInt, kInt), Coercion::id(kInt));
  EXPECT_EQ(to_string(coerce(kDyn, Typ::arrow(kInt, kInt))), "fun?; wrap(int!, int?)");
  EXPECT_EQ(to_string(coerce(kInt, kBool)), "int!; bool?");
  EXPECT_EQ(to_string(coerce(kInt, kDyn)), "int!");
  EXPECT_EQ(to_string(coerce(Typ::arrow(kInt, kInt), kDyn)), "wrap(int?, int!); fun!");
}

TEST(Coerce, StructuredTypes) {
  EXPECT_EQ(to_string(coerce(Typ::ref(kInt), Typ::ref(kDyn))), "wrapref(int!, int?)");
  EXPECT_EQ(to_string(coerce(kDyn, Typ::pair(kInt, kBool))), "pair?; wrappair(int?, bool?)");
  EXPECT_EQ(to_string(coerce(Typ::vector(kDyn), Typ::vector(kBool))), "wrapvec(bool?, bool!)");
}

TEST(Coerce, WellTyped) {
  testing::Random rnd(31);
  for (int i = 0; i < 10000; ++i) {
    Typ s = rnd.type(4), t = rnd.type(4);
    Coercion k = coerce(s, t);
    ASSERT_TRUE(typecheck_coercion(k, s, t)) << to_string(s) << " => " << to_string(t) << ": " << to_string(k);
  }
}

TEST(CoercionType, Examples) {
  auto tag = coercion_type(Coercion::tag(GroundTy::Int));
  ASSERT_TRUE(tag);
  EXPECT_EQ(tag->source, kInt);
  EXPECT_EQ(tag->target, kDyn);
  auto wrap = coercion_type(Coercion::wrap(Coercion::tag(GroundTy::Int), Coercion::untag(GroundTy::Int)));
  ASSERT_TRUE(wrap);
  EXPECT_EQ(wrap->source, Typ::arrow(kDyn, kDyn));
  EXPECT_EQ(wrap->target, Typ::arrow(kInt, kInt));
  EXPECT_FALSE(coercion_type(Coercion::seq(Coercion::tag(GroundTy::Int), Coercion::tag(GroundTy::Bool))));
}

TEST(InsertCoercions, Examples) {
  auto [lit, lit_type] = insert_coercions({}, parse("5"));
  EXPECT_EQ(lit, num(5));
  EXPECT_EQ(lit_type, kInt);

  auto [app, app_type] = insert_coercions({}, parse("(fun x. x) 5"));
  EXPECT_EQ(app_type, kDyn);
  EXPECT_EQ(app, Expr::app(parse("fun x. x"), Expr::coerce(Coercion::tag(GroundTy::Int), num(5))));

  auto [farg, farg_type] = insert_coercions({}, parse("(fun (f:any). f true) (fun (x:any). x + 100)"));
  EXPECT_EQ(typecheck_coerced({}, farg), farg_type);
  Outcome o = eval(farg);
  ASSERT_TRUE(o.is_stuck_coercion()) << describe(o);
  auto stuck = std::get<outcome::StuckCoercion>(o.result);
  EXPECT_EQ(stuck.expected, GroundTy::Int);
  EXPECT_EQ(stuck.found, GroundTy::Bool);
}

TEST(InsertCoercions, RejectsOnlyIllTyped) {
  EXPECT_THROW(insert_coercions({}, parse("true * 1")), IllTyped);
  EXPECT_THROW(insert_coercions({}, parse("5 5")), IllTyped);
  EXPECT_NO_THROW(insert_coercions({}, parse("(fun x. x) true * 1")));
}

TEST(TypecheckCoerced, Examples) {
  EXPECT_EQ(typecheck_coerced({}, Expr::coerce(Coercion::tag(GroundTy::Int), num(5))), kDyn);
  EXPECT_THROW(typecheck_coerced({}, Expr::coerce(Coercion::tag(GroundTy::Bool), num(5))), IllTyped);
  // No consistency: an unknown-typed argument needs an explicit coercion.
  Expr f = parse("fun (x:int). x");
  EXPECT_THROW(typecheck_coerced({{"y", kDyn}}, Expr::app(f, Expr::var("y"))), IllTyped);
}

TEST(TypecheckCoerced, AgreesWithGradualTyping) {
  testing::Random rnd(32);
  int checked = 0;
  for (int i = 0; i < 4000; ++i) {
    Expr e = rnd.program(5, true);
    Typ gradual;
    try {
      gradual = typecheck_gtlc({}, e);
    } catch (const IllTyped&) {
      EXPECT_THROW(insert_coercions({}, e), IllTyped);
      continue;
    }
    auto [coerced, t] = insert_coercions({}, e);
    EXPECT_EQ(t, gradual) << print(e);
    EXPECT_EQ(typecheck_coerced({}, coerced), t) << print(e);
    EXPECT_EQ(erase_coercions(coerced), e);
    ++checked;
  }
  EXPECT_GT(checked, 300);
}

TEST(Eval, Examples) {
  Outcome id = eval(Expr::coerce(Coercion::id(kInt), num(5)));
  ASSERT_TRUE(id.is_value());
  EXPECT_EQ(std::get<outcome::Val>(id.result).value, num(5));

  Outcome untag = eval(Expr::coerce(Coercion::untag(GroundTy::Int), Expr::box(GroundTy::Int, num(5))));
  ASSERT_TRUE(untag.is_value());
  EXPECT_EQ(std::get<outcome::Val>(untag.result).value, num(5));

  Outcome bad = eval(Expr::coerce(Coercion::untag(GroundTy::Bool), Expr::box(GroundTy::Int, num(5))));
  EXPECT_TRUE(bad.is_stuck_coercion());
}

TEST(Eval, RetaggingIsStuck) {
  Outcome o = eval(Expr::coerce(Coercion::tag(GroundTy::Int), Expr::box(GroundTy::Int, num(5))));
  EXPECT_TRUE(o.is_stuck_coercion());
}

TEST(Eval, StoreAndTimeout) {
  auto run = [](const char* src, std::size_t limit = kDefaultStepLimit) {
    return eval(insert_coercions({}, parse(src)).first, limit);
  };
  Outcome r = run("let r = ref 1 in r := !r + 41; !r");
  ASSERT_TRUE(r.is_value());
  EXPECT_EQ(to_string(obs(std::get<outcome::Val>(r.result).value, std::get<outcome::Val>(r.result).store)), "42");

  Outcome v = run("veclen(vecset(vec(0, 3), 1, 5)) + vecget(vecset(vec(0, 3), 2, 7), 2)");
  ASSERT_TRUE(v.is_value()) << describe(v);
  EXPECT_EQ(std::get<outcome::Val>(v.result).value, num(10));

  Outcome loop = run("(fix f:any. fun x. f x) 1", 500);
  EXPECT_TRUE(loop.is_timeout());
  EXPECT_FALSE(loop.is_stuck());

  Outcome oob = run("vecget(vec(0, 2), 5)");
  EXPECT_TRUE(oob.is_stuck());
  EXPECT_FALSE(oob.is_stuck_coercion());
}

TEST(Obs, Examples) {
  Store store;
  EXPECT_EQ(obs(Expr::box(GroundTy::Int, num(5)), store), obs(num(5), store));
  EXPECT_EQ(obs(parse("fun x. x"), store).kind, Observation::Kind::Fn);
  Expr pair = Expr::pair(Expr::box(GroundTy::Bool, Expr::lit(true)), parse("fun x. x"));
  Observation o = obs(pair, store);
  EXPECT_EQ(o.kind, Observation::Kind::Struct);
  ASSERT_EQ(o.children.size(), 2u);
  EXPECT_EQ(o.children[0], obs(Expr::lit(true), store));
}

TEST(Obs, Agreement) {
  Outcome five = eval(num(5));
  Outcome boxed = eval(Expr::box(GroundTy::Int, num(5)));
  Outcome six = eval(num(6));
  Outcome stuck = eval(Expr::coerce(Coercion::untag(GroundTy::Bool), Expr::box(GroundTy::Int, num(5))));
  EXPECT_TRUE(outcomes_agree(five, boxed));
  EXPECT_FALSE(outcomes_agree(five, six));
  EXPECT_FALSE(outcomes_agree(five, stuck));
  EXPECT_TRUE(outcomes_agree(stuck, stuck));
}

TEST(Eval, Deterministic) {
  testing::Random rnd(33);
  for (int i = 0; i < 300; ++i) {
    Expr e = rnd.program(5, true);
    std::pair<Expr, Typ> c;
    try {
      c = insert_coercions({}, e);
    } catch (const IllTyped&) {
      continue;
    }
    Outcome a = eval(c.first, 20000), b = eval(c.first, 20000);
    EXPECT_EQ(describe(a), describe(b));
    EXPECT_EQ(a.steps, b.steps);
  }
}

// Each step preserves the explicit-coercion type, given a typing for the store.
TEST(Eval, Preservation) {
  testing::Random rnd(34);
  int traces = 0;
  for (int i = 0; i < 2000; ++i) {
    Expr e = rnd.program(5, true);
    std::pair<Expr, Typ> c;
    try {
      c = insert_coercions({}, e);
    } catch (const IllTyped&) {
      continue;
    }
    Machine m(c.first);
    StoreTyping typing;
    bool typable = true;
    for (int step = 0; step < 2000 && typable; ++step) {
      if (m.step() != Machine::Status::Running && !is_value(m.term())) break;
      const auto& entries = m.store().entries;
      for (std::size_t a = typing.size(); a < entries.size(); ++a) {
        if (entries[a].slots.empty()) {
          typable = false;
          break;
        }
        typing[a] = typecheck_coerced({}, entries[a].slots.front(), &typing);
      }
      if (!typable) break;
      ASSERT_EQ(typecheck_coerced({}, m.term(), &typing), c.second) << print(c.first, PrintStyle::WithCoercions);
      if (is_value(m.term())) break;
    }
    ++traces;
  }
  EXPECT_GT(traces, 200);
}

// [wrap(k1, k2)] v applied to x behaves like [k2] (v ([k1] x)).
TEST(Eval, WrapExpansion) {
  testing::Random rnd(35);
  const Typ simple[] = {kInt, kBool, Typ::string(), kDyn};
  for (int i = 0; i < 2000; ++i) {
    Typ a = simple[rnd.below(4)], b = simple[rnd.below(4)], c = simple[rnd.below(4)], d = simple[rnd.below(4)];
    Constant k = rnd.constant();
    if (!consistent(type_of(k), c)) continue;
    Expr x = Expr::coerce(coerce(type_of(k), c), Expr::lit(k));
    Expr v = Expr::fun("y", a, Expr::coerce(coerce(a, b), Expr::var("y")));
    Coercion k1 = coerce(c, a), k2 = coerce(b, d);
    Expr wrapped = Expr::app(Expr::coerce(Coercion::wrap(k1, k2), v), x);
    Expr expanded = Expr::coerce(k2, Expr::app(v, Expr::coerce(k1, x)));
    Outcome lhs = eval(wrapped), rhs = eval(expanded);
    EXPECT_TRUE(outcomes_agree(lhs, rhs)) << describe(lhs) << " vs " << describe(rhs);
  }
}

TEST(Substitute, AvoidsCapture) {
  Expr body = parse("fun y. x");
  Expr out = substitute(body, "x", Expr::var("y"));
  ASSERT_EQ(out.kind(), ExprKind::Fun);
  EXPECT_NE(out.name(), "y");
  EXPECT_EQ(out.operand(0), Expr::var("y"));
}

}  // namespace
}  // namespace migron
