#include <gtest/gtest.h>

#include "../support/random_programs.hpp"
#include "migron/expr.hpp"
#include "migron/syntax.hpp"
#include "migron/types.hpp"

namespace migron {
namespace {

const Typ kInt = Typ::integer();
const Typ kBool = Typ::boolean();
const Typ kDyn = Typ::unknown();

TEST(Consistency, Examples) {
  EXPECT_TRUE(consistent(kInt, kDyn));
  EXPECT_FALSE(consistent(kInt, kBool));
  EXPECT_TRUE(consistent(Typ::arrow(kDyn, kInt), Typ::arrow(kBool, kInt)));
}

TEST(Consistency, NotTransitive) {
  EXPECT_TRUE(consistent(kInt, kDyn));
  EXPECT_TRUE(consistent(kDyn, kBool));
  EXPECT_FALSE(consistent(kInt, kBool));
}

TEST(Consistency, ReflexiveAndSymmetric) {
  testing::Random rnd(11);
  for (int i = 0; i < 2000; ++i) {
    Typ s = rnd.type(4), t = rnd.type(4);
    EXPECT_TRUE(consistent(s, s)) << to_string(s);
    EXPECT_EQ(consistent(s, t), consistent(t, s)) << to_string(s) << " ~ " << to_string(t);
  }
}

TEST(Consistency, ExtendsToStructures) {
  EXPECT_TRUE(consistent(Typ::ref(kDyn), Typ::ref(kInt)));
  EXPECT_FALSE(consistent(Typ::ref(kBool), Typ::ref(kInt)));
  EXPECT_TRUE(consistent(Typ::pair(kInt, kDyn), Typ::pair(kDyn, kBool)));
  EXPECT_FALSE(consistent(Typ::vector(kInt), Typ::ref(kInt)));
}

TEST(Precision, Examples) {
  EXPECT_TRUE(type_precision(kDyn, kInt));
  EXPECT_TRUE(type_precision(Typ::arrow(kInt, kDyn), Typ::arrow(kInt, kInt)));
  EXPECT_FALSE(type_precision(kInt, kBool));
  EXPECT_FALSE(type_precision(kInt, kDyn));
}

TEST(Precision, PartialOrder) {
  testing::Random rnd(12);
  for (int i = 0; i < 3000; ++i) {
    Typ a = rnd.type(5), b = rnd.type(5), c = rnd.type(5);
    EXPECT_TRUE(type_precision(a, a));
    if (type_precision(a, b) && type_precision(b, a)) EXPECT_EQ(a, b);
    if (type_precision(a, b) && type_precision(b, c)) EXPECT_TRUE(type_precision(a, c));
  }
  // Chains built by erasing subterms exercise transitivity on related triples.
  for (int i = 0; i < 1000; ++i) {
    Typ top = rnd.type(5);
    std::function<Typ(const Typ&)> erase = [&](const Typ& t) -> Typ {
      if (rnd.chance(0.25)) return kDyn;
      auto kids = t.children();
      if (kids.empty()) return t;
      for (auto& k : kids) k = erase(k);
      return t.with_children(kids);
    };
    Typ mid = erase(top), low = erase(mid);
    EXPECT_TRUE(type_precision(mid, top));
    EXPECT_TRUE(type_precision(low, mid));
    EXPECT_TRUE(type_precision(low, top));
    EXPECT_TRUE(consistent(low, top));
  }
}

TEST(Ground, Examples) {
  EXPECT_TRUE(is_ground(kInt));
  EXPECT_TRUE(is_ground(Typ::arrow(kDyn, kDyn)));
  EXPECT_FALSE(is_ground(Typ::arrow(kInt, kInt)));
  EXPECT_FALSE(is_ground(kDyn));
  EXPECT_TRUE(is_ground(Typ::ref(kDyn)));
  EXPECT_TRUE(is_ground(Typ::pair(kDyn, kDyn)));
  EXPECT_TRUE(is_ground(Typ::vector(kDyn)));
}

TEST(Ground, BijectionWithGroundTypes) {
  auto grounds = all_grounds();
  EXPECT_EQ(grounds.size(), 8u);
  for (GroundTy g : grounds) {
    Typ t = ground_type(g);
    EXPECT_TRUE(is_ground(t));
    EXPECT_EQ(ground_of(t), g);
    for (const auto& k : t.children()) EXPECT_TRUE(k.is_unknown());
  }
  testing::Random rnd(13);
  for (int i = 0; i < 2000; ++i) {
    Typ t = rnd.type(3);
    if (!is_ground(t)) continue;
    EXPECT_EQ(ground_type(*ground_of(t)), t);
  }
}

TEST(Metavars, ClosedAndCollected) {
  Typ a = Typ::metavar({0}), b = Typ::metavar({7});
  Typ t = Typ::arrow(a, Typ::pair(b, kInt));
  EXPECT_FALSE(t.is_closed());
  EXPECT_TRUE(Typ::arrow(kInt, kDyn).is_closed());
  std::vector<MetavarId> found;
  collect_metavars(t, found);
  ASSERT_EQ(found.size(), 2u);
  EXPECT_EQ(found[0].value, 0u);
  EXPECT_EQ(found[1].value, 7u);
}

TEST(ExprPrecision, Examples) {
  Expr dyn_id = parse("fun (x:any). x");
  EXPECT_TRUE(expr_precision(dyn_id, parse("fun (x:int). x")));
  EXPECT_FALSE(expr_precision(dyn_id, parse("fun (x:any). 5")));
  EXPECT_FALSE(expr_precision(parse("fun (x:int). x"), dyn_id));
  Expr farg = parse("(fun (f:any). f true) (fun (x:any). x + 100)");
  EXPECT_TRUE(expr_precision(farg, farg));
}

TEST(ExprPrecision, Transitive) {
  testing::Random rnd(14);
  for (int i = 0; i < 300; ++i) {
    Expr e = rnd.program(4, true);
    auto lower = [&](const Expr& x) {
      return map_expr(x, [&](const Expr& n) {
        if ((n.kind() == ExprKind::Fun || n.kind() == ExprKind::Fix) && rnd.chance(0.5))
          return n.with_annotation(Typ::unknown());
        return n;
      });
    };
    Expr mid = lower(e), low = lower(mid);
    EXPECT_TRUE(expr_precision(mid, e));
    EXPECT_TRUE(expr_precision(low, mid));
    EXPECT_TRUE(expr_precision(low, e));
  }
}

TEST(Expr, FreeVarsAndSurface) {
  Expr e = parse("fun x. x y");
  auto fv = free_vars(e);
  ASSERT_EQ(fv.size(), 1u);
  EXPECT_EQ(fv[0], "y");
  EXPECT_TRUE(is_surface(e));
  Expr coerced = Expr::coerce(Coercion::tag(GroundTy::Int), Expr::lit(std::int64_t{5}));
  EXPECT_FALSE(is_surface(coerced));
  EXPECT_EQ(erase_coercions(coerced), Expr::lit(std::int64_t{5}));
}

TEST(Expr, BinderAnnotationsPreOrder) {
  auto bs = binder_annotations(parse("(fun (f:int -> int). fun g. f) (fix h:any. fun (z:bool). z)"));
  ASSERT_EQ(bs.size(), 4u);
  EXPECT_EQ(bs[0].name, "f");
  EXPECT_EQ(bs[0].type, Typ::arrow(kInt, kInt));
  EXPECT_EQ(bs[1].name, "g");
  EXPECT_EQ(bs[2].name, "h");
  EXPECT_EQ(bs[3].name, "z");
  EXPECT_EQ(bs[3].type, kBool);
}

}  // namespace
}  // namespace migron
