#include "migron/cgen.hpp"

#include "migron/error.hpp"

namespace migron {

Typ FreshSupply::metavar() {
  MetavarId id{static_cast<std::uint32_t>(metavars_.size())};
  metavars_.push_back(id);
  return Typ::metavar(id);
}

WeightId FreshSupply::weight() {
  WeightId id{static_cast<std::uint32_t>(weights_.size())};
  weights_.push_back(id);
  return id;
}

Expr introduce_metavars(const Expr& e, FreshSupply& fresh) {
  Expr out = e;
  if ((e.kind() == ExprKind::Fun || e.kind() == ExprKind::Fix) && e.annotation().is_unknown())
    out = e.with_annotation(fresh.metavar());
  if (e.operands().empty()) return out;
  std::vector<Expr> kids;
  for (const auto& k : e.operands()) kids.push_back(introduce_metavars(k, fresh));
  return out.with_operands(std::move(kids));
}

namespace {

using C = Constraint;

const Typ kDyn = Typ::unknown();

C eq(const Typ& a, const Typ& b) { return C::eq(a, b); }
C taggable(const Typ& t) { return eq(t, kDyn) || C::is_ground(t); }

Expr site(const Typ& from, const Typ& to, Expr e) {
  SourceLoc loc = e.loc();
  return Expr::coerce(SuspendedCoercion{from, to}, std::move(e), loc);
}

class Generator {
 public:
  explicit Generator(FreshSupply& fresh) : fresh_(fresh) {}

  struct Result {
    Expr expr;
    Typ typ;
  };

  Result gen(const TypeEnv& env, const Expr& e);

  std::vector<C> conjuncts;
  std::vector<WeightId> weights;

 private:
  FreshSupply& fresh_;

  Typ meta() { return fresh_.metavar(); }
  C weight(WeightId& id) {
    id = fresh_.weight();
    weights.push_back(id);
    return C::weight(id);
  }
  void emit(C c) { conjuncts.push_back(std::move(c)); }

  // (α = from ∧ w) ∨ (α = ⋆ ∧ [ground(from)] ∧ ¬w); wraps e in [coerce(from, α)].
  Result outer(const Typ& from, Expr e, bool needs_ground) {
    Typ a = meta();
    WeightId id;
    C w = weight(id);
    C dyn = needs_ground ? eq(a, kDyn) && C::is_ground(from) && !w : eq(a, kDyn) && !w;
    emit((eq(a, from) && w) || dyn);
    return {site(from, a, std::move(e)), a};
  }

  // (T = target ∧ w) ∨ (T = ⋆ ∧ ¬w); wraps e in [coerce(T, target)].
  Expr operand(const Result& r, const Typ& target) {
    WeightId id;
    C w = weight(id);
    emit((eq(r.typ, target) && w) || (eq(r.typ, kDyn) && !w));
    return site(r.typ, target, r.expr);
  }
};

TypeEnv extend(const TypeEnv& env, const std::string& x, const Typ& t) {
  TypeEnv out = env;
  out[x] = t;
  return out;
}

Generator::Result Generator::gen(const TypeEnv& env, const Expr& e) {
  const auto& o = e.operands();
  switch (e.kind()) {
    case ExprKind::Var: {
      auto it = env.find(e.name());
      if (it == env.end()) throw UnboundVariable(e.name());
      return outer(it->second, e, false);
    }
    case ExprKind::Lit: return outer(type_of(e.constant()), e, false);
    case ExprKind::Fun: {
      const Typ& a = e.annotation();
      Result body = gen(extend(env, e.name(), a), o[0]);
      return outer(Typ::arrow(a, body.typ), e.with_operands({body.expr}), true);
    }
    case ExprKind::App: {
      Result f = gen(env, o[0]);
      Result x = gen(env, o[1]);
      Typ a = meta(), b = meta(), g = meta();
      WeightId i1, i2;
      C w1 = weight(i1);
      emit((eq(f.typ, Typ::arrow(a, b)) && w1) || (eq(f.typ, kDyn) && eq(a, kDyn) && eq(b, kDyn) && !w1));
      emit(eq(x.typ, a));
      C w2 = weight(i2);
      emit((eq(b, g) && w2) || (eq(g, kDyn) && !w2));
      Expr call = e.with_operands({site(f.typ, Typ::arrow(a, b), f.expr), x.expr});
      return {site(b, g, call), g};
    }
    case ExprKind::Mul: {
      Result l = gen(env, o[0]);
      Result r = gen(env, o[1]);
      Expr lhs = operand(l, Typ::integer());
      Expr rhs = operand(r, Typ::integer());
      return outer(Typ::integer(), e.with_operands({lhs, rhs}), false);
    }
    case ExprKind::Add: {
      Result l = gen(env, o[0]);
      Result r = gen(env, o[1]);
      Typ a = meta();
      WeightId iw, i1, i2;
      C w = weight(iw), w1 = weight(i1), w2 = weight(i2);
      C numeric = (eq(a, Typ::integer()) || eq(a, Typ::string())) && w &&
                  ((eq(l.typ, a) && w1) || (eq(l.typ, kDyn) && !w1)) &&
                  ((eq(r.typ, a) && w2) || (eq(r.typ, kDyn) && !w2));
      C dynamic = C::conj({eq(a, kDyn), !w, !w1, !w2, taggable(l.typ), taggable(r.typ)});
      emit(numeric || dynamic);
      return {e.with_operands({site(l.typ, a, l.expr), site(r.typ, a, r.expr)}), a};
    }
    case ExprKind::If: {
      Result c = gen(env, o[0]);
      Result t = gen(env, o[1]);
      Result f = gen(env, o[2]);
      Typ a = meta();
      Expr cond = operand(c, Typ::boolean());
      WeightId i2;
      C w2 = weight(i2);
      emit((eq(t.typ, a) && eq(f.typ, a) && w2) || C::conj({eq(a, kDyn), taggable(t.typ), taggable(f.typ), !w2}));
      return {e.with_operands({cond, site(t.typ, a, t.expr), site(f.typ, a, f.expr)}), a};
    }
    case ExprKind::Let: {
      Result bound = gen(env, o[0]);
      Result body = gen(extend(env, e.name(), bound.typ), o[1]);
      return {e.with_operands({bound.expr, body.expr}), body.typ};
    }
    case ExprKind::Seq: {
      Result a = gen(env, o[0]);
      Result b = gen(env, o[1]);
      return {e.with_operands({a.expr, b.expr}), b.typ};
    }
    case ExprKind::Fix: {
      const Typ& a = e.annotation();
      Result body = gen(extend(env, e.name(), a), o[0]);
      WeightId id;
      C w = weight(id);
      emit((eq(body.typ, a) && w) || C::conj({eq(body.typ, kDyn), eq(a, ground_type(GroundTy::Fun)), !w}));
      return {e.with_operands({site(body.typ, a, body.expr)}), a};
    }
    case ExprKind::RefNew: {
      Result init = gen(env, o[0]);
      return outer(Typ::ref(init.typ), e.with_operands({init.expr}), true);
    }
    case ExprKind::Deref: {
      Result r = gen(env, o[0]);
      Typ a = meta();
      WeightId id;
      C w = weight(id);
      emit((eq(r.typ, Typ::ref(a)) && w) || (eq(r.typ, kDyn) && eq(a, kDyn) && !w));
      return {e.with_operands({site(r.typ, Typ::ref(a), r.expr)}), a};
    }
    case ExprKind::SetRef: {
      Result r = gen(env, o[0]);
      Result v = gen(env, o[1]);
      Typ a = meta();
      WeightId id;
      C w = weight(id);
      emit((eq(r.typ, Typ::ref(a)) && eq(v.typ, a) && w) ||
           C::conj({eq(a, kDyn), taggable(r.typ), taggable(v.typ), !w}));
      Expr assign = e.with_operands({site(r.typ, Typ::ref(a), r.expr), site(v.typ, a, v.expr)});
      return outer(Typ::unit(), assign, false);
    }
    case ExprKind::PairNew: {
      Result l = gen(env, o[0]);
      Result r = gen(env, o[1]);
      return outer(Typ::pair(l.typ, r.typ), e.with_operands({l.expr, r.expr}), true);
    }
    case ExprKind::First:
    case ExprKind::Second: {
      Result p = gen(env, o[0]);
      Typ a = meta(), b = meta();
      const Typ& picked = e.kind() == ExprKind::First ? a : b;
      WeightId id;
      C w = weight(id);
      emit((eq(p.typ, Typ::pair(a, b)) && w) || (eq(p.typ, kDyn) && eq(picked, kDyn) && !w));
      return {e.with_operands({site(p.typ, Typ::pair(a, b), p.expr)}), picked};
    }
    case ExprKind::VecNew: {
      Result init = gen(env, o[0]);
      Result size = gen(env, o[1]);
      Typ a = meta();
      WeightId i1;
      C w1 = weight(i1);
      Typ vec = Typ::vector(init.typ);
      emit((eq(a, vec) && w1) || (eq(a, kDyn) && C::is_ground(vec) && !w1));
      Expr n = operand(size, Typ::integer());
      return {site(vec, a, e.with_operands({init.expr, n})), a};
    }
    case ExprKind::VecGet: {
      Result v = gen(env, o[0]);
      Result i = gen(env, o[1]);
      Typ a = meta();
      Expr index = operand(i, Typ::integer());
      WeightId i2;
      C w2 = weight(i2);
      emit((eq(v.typ, kDyn) && eq(a, kDyn) && !w2) || (eq(v.typ, Typ::vector(a)) && w2));
      return {e.with_operands({site(v.typ, Typ::vector(a), v.expr), index}), a};
    }
    case ExprKind::VecSet: {
      Result v = gen(env, o[0]);
      Result i = gen(env, o[1]);
      Result x = gen(env, o[2]);
      Typ a = meta();
      Expr index = operand(i, Typ::integer());
      WeightId i2;
      C w2 = weight(i2);
      emit((eq(v.typ, Typ::vector(a)) && eq(x.typ, a) && w2) ||
           C::conj({eq(a, kDyn), taggable(v.typ), taggable(x.typ), !w2}));
      Expr set = e.with_operands({site(v.typ, Typ::vector(a), v.expr), index, site(x.typ, a, x.expr)});
      return outer(Typ::vector(a), set, true);
    }
    case ExprKind::VecLen: {
      // Length with a synthesized integer index, so its index constraint is trivially satisfiable.
      Result v = gen(env, o[0]);
      Typ a = meta();
      WeightId i1, i2;
      C w1 = weight(i1);
      emit((eq(Typ::integer(), Typ::integer()) && w1) || (eq(Typ::integer(), kDyn) && !w1));
      C w2 = weight(i2);
      emit((eq(v.typ, Typ::vector(a)) && w2) || (eq(v.typ, kDyn) && eq(a, kDyn) && !w2));
      return outer(Typ::integer(), e.with_operands({site(v.typ, Typ::vector(a), v.expr)}), false);
    }
    default: throw Error("cgen on a non-surface expression: " + to_string(e.kind()));
  }
}

}  // namespace

CgenOutput cgen(const TypeEnv& env, const Expr& e, FreshSupply& fresh) {
  Generator g(fresh);
  auto r = g.gen(env, e);
  return {r.expr, r.typ, Constraint::conj(std::move(g.conjuncts)), std::move(g.weights)};
}

std::vector<SoftAssertion> soft_constraints(const std::vector<WeightId>& weights) {
  std::vector<SoftAssertion> out;
  out.reserve(weights.size());
  for (WeightId w : weights) out.push_back({w, 1});
  return out;
}

}  // namespace migron
