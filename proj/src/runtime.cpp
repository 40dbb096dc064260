#include "migron/runtime.hpp"

#include <stdexcept>

#include "migron/error.hpp"

namespace migron {

namespace {

using K = Typ::Kind;

bool structured(const Typ& t) {
  return t.kind() == K::Arrow || t.kind() == K::Ref || t.kind() == K::Pair || t.kind() == K::Vector;
}

// Congruence coercion between two types with the same outer constructor.
Coercion congruence(const Typ& s, const Typ& t) {
  switch (s.kind()) {
    case K::Arrow: return Coercion::wrap(coerce(t.input(), s.input()), coerce(s.output(), t.output()));
    case K::Ref: return Coercion::wrap_ref(coerce(s.content(), t.content()), coerce(t.content(), s.content()));
    case K::Pair: return Coercion::wrap_pair(coerce(s.left(), t.left()), coerce(s.right(), t.right()));
    case K::Vector: return Coercion::wrap_vec(coerce(s.elem(), t.elem()), coerce(t.elem(), s.elem()));
    default: throw std::logic_error("congruence on unstructured type");
  }
}

}  // namespace

Coercion coerce(const Typ& s, const Typ& t) {
  if (!s.is_closed() || !t.is_closed()) throw std::logic_error("coerce on open types");
  if (s == t) return Coercion::id(s);
  if (s.is_unknown() && is_ground(t)) return Coercion::untag(*ground_of(t));
  if (is_ground(s) && t.is_unknown()) return Coercion::tag(*ground_of(s));
  if (structured(s) && s.kind() == t.kind()) return congruence(s, t);
  if (s.is_unknown() && structured(t)) {
    Typ g = ground_type(*ground_of(t));
    return Coercion::seq(Coercion::untag(*ground_of(t)), congruence(g, t));
  }
  if (structured(s) && t.is_unknown()) {
    Typ g = ground_type(*ground_of(s));
    return Coercion::seq(congruence(s, g), Coercion::tag(*ground_of(s)));
  }
  return Coercion::seq(coerce(s, Typ::unknown()), coerce(Typ::unknown(), t));
}

std::optional<CoercionType> coercion_type(const Coercion& k) {
  using CK = Coercion::Kind;
  switch (k.kind()) {
    case CK::Id: return CoercionType{k.id_type(), k.id_type()};
    case CK::Tag: return CoercionType{ground_type(k.ground()), Typ::unknown()};
    case CK::Untag: return CoercionType{Typ::unknown(), ground_type(k.ground())};
    default: break;
  }
  auto a = coercion_type(k.first());
  auto b = coercion_type(k.second());
  if (!a || !b) return std::nullopt;
  switch (k.kind()) {
    case CK::Wrap: return CoercionType{Typ::arrow(a->target, b->source), Typ::arrow(a->source, b->target)};
    case CK::Seq:
      if (a->target != b->source) return std::nullopt;
      return CoercionType{a->source, b->target};
    case CK::WrapPair: return CoercionType{Typ::pair(a->source, b->source), Typ::pair(a->target, b->target)};
    case CK::WrapRef:
    case CK::WrapVec:
      if (a->source != b->target || a->target != b->source) return std::nullopt;
      if (k.kind() == CK::WrapRef) return CoercionType{Typ::ref(a->source), Typ::ref(a->target)};
      return CoercionType{Typ::vector(a->source), Typ::vector(a->target)};
    default: return std::nullopt;
  }
}

bool typecheck_coercion(const Coercion& k, const Typ& source, const Typ& target) {
  auto ty = coercion_type(k);
  return ty && ty->source == source && ty->target == target;
}

namespace {

TypeEnv extend(const TypeEnv& env, const std::string& x, const Typ& t) {
  TypeEnv out = env;
  out[x] = t;
  return out;
}

[[noreturn]] void reject(const Expr& e, const std::string& why) { throw IllTyped(e.loc(), why); }

Expr cast(Expr e, const Typ& from, const Typ& to) {
  if (from == to) return e;
  SourceLoc loc = e.loc();
  return Expr::coerce(coerce(from, to), std::move(e), loc);
}

Expr cast_checked(const Expr& origin, Expr e, const Typ& from, const Typ& to) {
  if (!consistent(from, to)) reject(origin, "expected a type consistent with " + to_string(to) + ", got " + to_string(from));
  return cast(std::move(e), from, to);
}

std::pair<Expr, Typ> elaborate(const TypeEnv& env, const Expr& e) {
  const auto& o = e.operands();
  const Typ dyn = Typ::unknown();
  auto sub = [&](std::size_t i) { return elaborate(env, o[i]); };
  switch (e.kind()) {
    case ExprKind::Var: {
      auto it = env.find(e.name());
      if (it == env.end()) reject(e, "unbound variable " + e.name());
      return {e, it->second};
    }
    case ExprKind::Lit: return {e, type_of(e.constant())};
    case ExprKind::Fun: {
      if (!e.annotation().is_closed()) reject(e, "open annotation");
      auto [body, t] = elaborate(extend(env, e.name(), e.annotation()), o[0]);
      return {e.with_operands({body}), Typ::arrow(e.annotation(), t)};
    }
    case ExprKind::App: {
      auto [f, ft] = sub(0);
      auto [a, at] = sub(1);
      if (ft.is_unknown())
        return {e.with_operands({cast(f, ft, ground_type(GroundTy::Fun)), cast(a, at, dyn)}), dyn};
      if (!ft.is_arrow()) reject(e, "application of a non-function of type " + to_string(ft));
      return {e.with_operands({f, cast_checked(o[1], a, at, ft.input())}), ft.output()};
    }
    case ExprKind::Mul: {
      auto [a, at] = sub(0);
      auto [b, bt] = sub(1);
      return {e.with_operands({cast_checked(o[0], a, at, Typ::integer()), cast_checked(o[1], b, bt, Typ::integer())}),
              Typ::integer()};
    }
    case ExprKind::Add: {
      auto [a, at] = sub(0);
      auto [b, bt] = sub(1);
      auto r = add_result(at, bt);
      if (!r) reject(e, "no overload of + for " + to_string(at) + " and " + to_string(bt));
      return {e.with_operands({cast(a, at, *r), cast(b, bt, *r)}), *r};
    }
    case ExprKind::If: {
      auto [c, ct] = sub(0);
      auto [a, at] = sub(1);
      auto [b, bt] = sub(2);
      auto r = branch_join(at, bt);
      if (!r) reject(e, "branches have inconsistent types");
      return {e.with_operands({cast_checked(o[0], c, ct, Typ::boolean()), cast(a, at, *r), cast(b, bt, *r)}), *r};
    }
    case ExprKind::Let: {
      auto [bound, bt] = sub(0);
      auto [body, t] = elaborate(extend(env, e.name(), bt), o[1]);
      return {e.with_operands({bound, body}), t};
    }
    case ExprKind::Seq: {
      auto [a, at] = sub(0);
      auto [b, bt] = sub(1);
      return {e.with_operands({a, b}), bt};
    }
    case ExprKind::Fix: {
      if (!e.annotation().is_closed()) reject(e, "open annotation");
      auto [body, t] = elaborate(extend(env, e.name(), e.annotation()), o[0]);
      return {e.with_operands({cast_checked(o[0], body, t, e.annotation())}), e.annotation()};
    }
    case ExprKind::RefNew: {
      auto [a, at] = sub(0);
      return {e.with_operands({a}), Typ::ref(at)};
    }
    case ExprKind::Deref: {
      auto [r, rt] = sub(0);
      if (rt.is_unknown()) return {e.with_operands({cast(r, rt, ground_type(GroundTy::Ref))}), dyn};
      if (rt.kind() != K::Ref) reject(e, "dereference of " + to_string(rt));
      return {e.with_operands({r}), rt.content()};
    }
    case ExprKind::SetRef: {
      auto [r, rt] = sub(0);
      auto [v, vt] = sub(1);
      if (rt.is_unknown())
        return {e.with_operands({cast(r, rt, ground_type(GroundTy::Ref)), cast(v, vt, dyn)}), Typ::unit()};
      if (rt.kind() != K::Ref) reject(e, "assignment through " + to_string(rt));
      return {e.with_operands({r, cast_checked(o[1], v, vt, rt.content())}), Typ::unit()};
    }
    case ExprKind::PairNew: {
      auto [a, at] = sub(0);
      auto [b, bt] = sub(1);
      return {e.with_operands({a, b}), Typ::pair(at, bt)};
    }
    case ExprKind::First:
    case ExprKind::Second: {
      auto [p, pt] = sub(0);
      if (pt.is_unknown()) return {e.with_operands({cast(p, pt, ground_type(GroundTy::Pair))}), dyn};
      if (pt.kind() != K::Pair) reject(e, "projection from " + to_string(pt));
      return {e.with_operands({p}), e.kind() == ExprKind::First ? pt.left() : pt.right()};
    }
    case ExprKind::VecNew: {
      auto [a, at] = sub(0);
      auto [n, nt] = sub(1);
      return {e.with_operands({a, cast_checked(o[1], n, nt, Typ::integer())}), Typ::vector(at)};
    }
    case ExprKind::VecGet:
    case ExprKind::VecSet:
    case ExprKind::VecLen: {
      auto [v, vt] = sub(0);
      if (!vt.is_unknown() && vt.kind() != K::Vector) reject(e, "vector operation on " + to_string(vt));
      Expr vec = vt.is_unknown() ? cast(v, vt, ground_type(GroundTy::Vector)) : v;
      Typ elem = vt.is_unknown() ? dyn : vt.elem();
      if (e.kind() == ExprKind::VecLen) return {e.with_operands({vec}), Typ::integer()};
      auto [i, it] = sub(1);
      Expr index = cast_checked(o[1], i, it, Typ::integer());
      if (e.kind() == ExprKind::VecGet) return {e.with_operands({vec, index}), elem};
      auto [x, xt] = sub(2);
      return {e.with_operands({vec, index, cast_checked(o[2], x, xt, elem)}), Typ::vector(elem)};
    }
    default: reject(e, "not a surface expression: " + to_string(e.kind()));
  }
}

struct CoercedChecker {
  const StoreTyping* store;

  Typ store_type(const Expr& e) const {
    if (!store) reject(e, "store address without a store typing");
    auto it = store->find(e.address());
    if (it == store->end()) reject(e, "unknown store address");
    return it->second;
  }

  void same(const Expr& e, const Typ& actual, const Typ& wanted) const {
    if (actual != wanted) reject(e, "expected " + to_string(wanted) + ", got " + to_string(actual));
  }

  Typ check(const TypeEnv& env, const Expr& e) const {
    const auto& o = e.operands();
    switch (e.kind()) {
      case ExprKind::Var: {
        auto it = env.find(e.name());
        if (it == env.end()) reject(e, "unbound variable " + e.name());
        return it->second;
      }
      case ExprKind::Lit: return type_of(e.constant());
      case ExprKind::Fun:
        if (!e.annotation().is_closed()) reject(e, "open annotation");
        return Typ::arrow(e.annotation(), check(extend(env, e.name(), e.annotation()), o[0]));
      case ExprKind::App: {
        Typ f = check(env, o[0]);
        Typ a = check(env, o[1]);
        if (!f.is_arrow()) reject(e, "application of " + to_string(f));
        same(o[1], a, f.input());
        return f.output();
      }
      case ExprKind::Mul:
        same(o[0], check(env, o[0]), Typ::integer());
        same(o[1], check(env, o[1]), Typ::integer());
        return Typ::integer();
      case ExprKind::Add: {
        Typ a = check(env, o[0]);
        same(o[1], check(env, o[1]), a);
        if (a != Typ::integer() && a != Typ::string() && !a.is_unknown()) reject(e, "+ at " + to_string(a));
        return a;
      }
      case ExprKind::If: {
        same(o[0], check(env, o[0]), Typ::boolean());
        Typ a = check(env, o[1]);
        same(o[2], check(env, o[2]), a);
        return a;
      }
      case ExprKind::Let: return check(extend(env, e.name(), check(env, o[0])), o[1]);
      case ExprKind::Seq:
        check(env, o[0]);
        return check(env, o[1]);
      case ExprKind::Fix:
        if (!e.annotation().is_closed()) reject(e, "open annotation");
        same(o[0], check(extend(env, e.name(), e.annotation()), o[0]), e.annotation());
        return e.annotation();
      case ExprKind::RefNew: return Typ::ref(check(env, o[0]));
      case ExprKind::Deref: {
        Typ r = check(env, o[0]);
        if (r.kind() != K::Ref) reject(e, "dereference of " + to_string(r));
        return r.content();
      }
      case ExprKind::SetRef: {
        Typ r = check(env, o[0]);
        if (r.kind() != K::Ref) reject(e, "assignment through " + to_string(r));
        same(o[1], check(env, o[1]), r.content());
        return Typ::unit();
      }
      case ExprKind::PairNew: return Typ::pair(check(env, o[0]), check(env, o[1]));
      case ExprKind::First:
      case ExprKind::Second: {
        Typ p = check(env, o[0]);
        if (p.kind() != K::Pair) reject(e, "projection from " + to_string(p));
        return e.kind() == ExprKind::First ? p.left() : p.right();
      }
      case ExprKind::VecNew: {
        Typ a = check(env, o[0]);
        same(o[1], check(env, o[1]), Typ::integer());
        return Typ::vector(a);
      }
      case ExprKind::VecGet:
      case ExprKind::VecSet:
      case ExprKind::VecLen: {
        Typ v = check(env, o[0]);
        if (v.kind() != K::Vector) reject(e, "vector operation on " + to_string(v));
        if (e.kind() == ExprKind::VecLen) return Typ::integer();
        same(o[1], check(env, o[1]), Typ::integer());
        if (e.kind() == ExprKind::VecGet) return v.elem();
        same(o[2], check(env, o[2]), v.elem());
        return v;
      }
      case ExprKind::CoerceApp: {
        if (std::holds_alternative<SuspendedCoercion>(e.coercion_slot())) reject(e, "suspended coercion");
        Typ s = check(env, o[0]);
        auto kt = coercion_type(e.coercion());
        if (!kt) reject(e, "ill-formed coercion " + to_string(e.coercion()));
        same(o[0], s, kt->source);
        return kt->target;
      }
      case ExprKind::Box: {
        same(o[0], check(env, o[0]), ground_type(e.ground()));
        return Typ::unknown();
      }
      case ExprKind::Cell: return Typ::ref(store_type(e));
      case ExprKind::VecCell: return Typ::vector(store_type(e));
      case ExprKind::Proxy: {
        auto kt = coercion_type(e.coercion());
        auto kind = e.coercion().kind();
        if (!kt || (kind != Coercion::Kind::WrapRef && kind != Coercion::Kind::WrapVec)) reject(e, "bad proxy");
        same(o[0], check(env, o[0]), kt->source);
        return kt->target;
      }
    }
    reject(e, "unknown expression");
  }
};

}  // namespace

std::pair<Expr, Typ> insert_coercions(const TypeEnv& env, const Expr& e) { return elaborate(env, e); }

Typ typecheck_coerced(const TypeEnv& env, const Expr& e, const StoreTyping* store) {
  return CoercedChecker{store}.check(env, e);
}

}  // namespace migron
