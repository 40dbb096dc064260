#include "migron/typecheck.hpp"

#include "migron/error.hpp"

namespace migron {

std::optional<Typ> add_result(const Typ& left, const Typ& right) {
  if (left.is_unknown() && right.is_unknown()) return Typ::unknown();
  for (const Typ& b : {Typ::integer(), Typ::string()})
    if (consistent(left, b) && consistent(right, b)) return b;
  return std::nullopt;
}

std::optional<Typ> branch_join(const Typ& then_type, const Typ& else_type) {
  if (then_type == else_type) return then_type;
  if (consistent(then_type, else_type)) return Typ::unknown();
  return std::nullopt;
}

namespace {

TypeEnv extend(const TypeEnv& env, const std::string& x, const Typ& t) {
  TypeEnv out = env;
  out[x] = t;
  return out;
}

[[noreturn]] void reject(const Expr& e, const std::string& why) { throw IllTyped(e.loc(), why); }

Typ check(const TypeEnv& env, const Expr& e);

void require(const Expr& e, const Typ& actual, const Typ& wanted) {
  if (!consistent(actual, wanted))
    reject(e, "expected a type consistent with " + to_string(wanted) + ", got " + to_string(actual));
}

Typ check(const TypeEnv& env, const Expr& e) {
  const auto& o = e.operands();
  switch (e.kind()) {
    case ExprKind::Var: {
      auto it = env.find(e.name());
      if (it == env.end()) reject(e, "unbound variable " + e.name());
      return it->second;
    }
    case ExprKind::Lit: return type_of(e.constant());
    case ExprKind::Fun: return Typ::arrow(e.annotation(), check(extend(env, e.name(), e.annotation()), o[0]));
    case ExprKind::App: {
      Typ f = check(env, o[0]);
      Typ a = check(env, o[1]);
      if (f.is_unknown()) return Typ::unknown();
      if (!f.is_arrow()) reject(e, "application of a non-function of type " + to_string(f));
      require(o[1], a, f.input());
      return f.output();
    }
    case ExprKind::Mul:
      require(o[0], check(env, o[0]), Typ::integer());
      require(o[1], check(env, o[1]), Typ::integer());
      return Typ::integer();
    case ExprKind::Add: {
      Typ a = check(env, o[0]);
      Typ b = check(env, o[1]);
      auto r = add_result(a, b);
      if (!r) reject(e, "no overload of + for " + to_string(a) + " and " + to_string(b));
      return *r;
    }
    case ExprKind::If: {
      require(o[0], check(env, o[0]), Typ::boolean());
      Typ a = check(env, o[1]);
      Typ b = check(env, o[2]);
      auto r = branch_join(a, b);
      if (!r) reject(e, "branches have inconsistent types " + to_string(a) + " and " + to_string(b));
      return *r;
    }
    case ExprKind::Let: return check(extend(env, e.name(), check(env, o[0])), o[1]);
    case ExprKind::Seq:
      check(env, o[0]);
      return check(env, o[1]);
    case ExprKind::Fix:
      require(o[0], check(extend(env, e.name(), e.annotation()), o[0]), e.annotation());
      return e.annotation();
    case ExprKind::RefNew: return Typ::ref(check(env, o[0]));
    case ExprKind::Deref: {
      Typ r = check(env, o[0]);
      if (r.is_unknown()) return r;
      if (r.kind() != Typ::Kind::Ref) reject(e, "dereference of " + to_string(r));
      return r.content();
    }
    case ExprKind::SetRef: {
      Typ r = check(env, o[0]);
      Typ v = check(env, o[1]);
      if (r.kind() == Typ::Kind::Ref)
        require(o[1], v, r.content());
      else if (!r.is_unknown())
        reject(e, "assignment through " + to_string(r));
      return Typ::unit();
    }
    case ExprKind::PairNew: return Typ::pair(check(env, o[0]), check(env, o[1]));
    case ExprKind::First:
    case ExprKind::Second: {
      Typ p = check(env, o[0]);
      if (p.is_unknown()) return p;
      if (p.kind() != Typ::Kind::Pair) reject(e, "projection from " + to_string(p));
      return e.kind() == ExprKind::First ? p.left() : p.right();
    }
    case ExprKind::VecNew: {
      Typ init = check(env, o[0]);
      require(o[1], check(env, o[1]), Typ::integer());
      return Typ::vector(init);
    }
    case ExprKind::VecGet:
    case ExprKind::VecSet:
    case ExprKind::VecLen: {
      Typ v = check(env, o[0]);
      if (!v.is_unknown() && v.kind() != Typ::Kind::Vector) reject(e, "vector operation on " + to_string(v));
      Typ elem = v.is_unknown() ? v : v.elem();
      if (e.kind() == ExprKind::VecLen) return Typ::integer();
      require(o[1], check(env, o[1]), Typ::integer());
      if (e.kind() == ExprKind::VecGet) return elem;
      require(o[2], check(env, o[2]), elem);
      return Typ::vector(elem);
    }
    default: reject(e, "not a surface expression: " + to_string(e.kind()));
  }
}

}  // namespace

Typ typecheck_gtlc(const TypeEnv& env, const Expr& e) { return check(env, e); }

}  // namespace migron
