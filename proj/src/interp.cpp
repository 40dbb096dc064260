#include "migron/interp.hpp"

#include <algorithm>
#include <atomic>

#include "migron/syntax.hpp"

namespace migron {

bool is_value(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Lit:
    case ExprKind::Fun:
    case ExprKind::Box:
    case ExprKind::Cell:
    case ExprKind::VecCell:
    case ExprKind::Proxy: return true;
    case ExprKind::PairNew: return is_value(e.operand(0)) && is_value(e.operand(1));
    default: return false;
  }
}

namespace {

constexpr std::size_t kMaxVectorLength = 1'000'000;

std::atomic<std::uint64_t> fresh_counter{0};

std::string fresh_name(const std::string& base) { return base + "'" + std::to_string(fresh_counter++); }

Expr subst(const Expr& e, const std::string& x, const Expr& v, const std::vector<std::string>& fv) {
  if (e.kind() == ExprKind::Var) return e.name() == x ? v : e;
  if (e.operands().empty()) return e;
  Expr node = e;
  std::vector<Expr> kids = e.operands();
  bool binder = e.kind() == ExprKind::Fun || e.kind() == ExprKind::Fix || e.kind() == ExprKind::Let;
  if (binder && e.name() != x && std::find(fv.begin(), fv.end(), e.name()) != fv.end()) {
    std::string renamed = fresh_name(e.name());
    Expr var = Expr::var(renamed);
    for (std::size_t i = 0; i < kids.size(); ++i)
      if (binds_in(e, i)) kids[i] = subst(kids[i], e.name(), var, {renamed});
    node = e.with_name(renamed);
  }
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (binds_in(node, i) && node.name() == x) continue;
    kids[i] = subst(kids[i], x, v, fv);
  }
  return node.with_operands(std::move(kids));
}

std::optional<GroundTy> ground_of_value(const Expr& v) {
  switch (v.kind()) {
    case ExprKind::Lit: return ground_of(type_of(v.constant()));
    case ExprKind::Fun: return GroundTy::Fun;
    case ExprKind::Cell: return GroundTy::Ref;
    case ExprKind::VecCell: return GroundTy::Vector;
    case ExprKind::PairNew: return GroundTy::Pair;
    case ExprKind::Proxy:
      return v.coercion().kind() == Coercion::Kind::WrapRef ? GroundTy::Ref : GroundTy::Vector;
    default: return std::nullopt;
  }
}

struct Stuck {
  Outcome outcome;
};

[[noreturn]] void stuck_other(const std::string& reason) { throw Stuck{{outcome::StuckOther{reason}, 0}}; }

[[noreturn]] void stuck_coercion(const Coercion& k, GroundTy expected, std::optional<GroundTy> found,
                                 const std::string& detail) {
  throw Stuck{{outcome::StuckCoercion{k, expected, found, detail}, 0}};
}

std::size_t strict_operands(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Fun:
    case ExprKind::Fix:
    case ExprKind::Lit:
    case ExprKind::Var:
    case ExprKind::Box:
    case ExprKind::Cell:
    case ExprKind::VecCell:
    case ExprKind::Proxy: return 0;
    case ExprKind::Let:
    case ExprKind::If:
    case ExprKind::Seq:
    case ExprKind::CoerceApp: return 1;
    default: return e.operands().size();
  }
}

const std::int64_t* as_int(const Expr& v) {
  return v.kind() == ExprKind::Lit ? std::get_if<std::int64_t>(&v.constant()) : nullptr;
}

const std::string* as_str(const Expr& v) {
  return v.kind() == ExprKind::Lit ? std::get_if<std::string>(&v.constant()) : nullptr;
}

std::int64_t wrapping_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}

std::int64_t wrapping_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

}  // namespace

Expr substitute(const Expr& e, const std::string& x, const Expr& v) { return subst(e, x, v, free_vars(v)); }

Machine::Machine(Expr program) : term_(std::move(program)) {}

Machine::Status Machine::step() {
  if (is_value(term_)) return Status::Done;
  try {
    term_ = reduce(term_);
    ++steps_;
    return Status::Running;
  } catch (Stuck& s) {
    stuck_ = std::move(s.outcome);
    stuck_.steps = steps_;
    return Status::Stuck;
  }
}

Expr Machine::reduce(const Expr& e) {
  std::size_t strict = strict_operands(e);
  for (std::size_t i = 0; i < strict; ++i) {
    if (!is_value(e.operand(i))) {
      std::vector<Expr> kids = e.operands();
      kids[i] = reduce(kids[i]);
      return e.with_operands(std::move(kids));
    }
  }
  return contract(e);
}

Expr Machine::apply_coercion(const Coercion& k, const Expr& v) {
  using CK = Coercion::Kind;
  switch (k.kind()) {
    case CK::Id: return v;
    case CK::Tag:
      if (v.kind() == ExprKind::Box) stuck_coercion(k, k.ground(), v.ground(), "a tagged value cannot be re-tagged");
      if (ground_of_value(v) != k.ground()) stuck_other("tag " + to_string(k) + " on a value of another shape");
      return Expr::box(k.ground(), v);
    case CK::Untag:
      if (v.kind() != ExprKind::Box) stuck_other("untag " + to_string(k) + " on an untagged value");
      if (v.ground() != k.ground()) stuck_coercion(k, k.ground(), v.ground(), "ground mismatch");
      return v.operand(0);
    case CK::Wrap: {
      if (v.kind() != ExprKind::Fun) stuck_other("function proxy on a non-function");
      auto arg_type = coercion_type(k.first());
      if (!arg_type) stuck_other("ill-formed coercion " + to_string(k));
      const std::string param = "%arg";
      Expr call = Expr::app(v, Expr::coerce(k.first(), Expr::var(param)));
      return Expr::fun(param, arg_type->source, Expr::coerce(k.second(), call));
    }
    case CK::Seq: return Expr::coerce(k.second(), Expr::coerce(k.first(), v));
    case CK::WrapRef:
    case CK::WrapVec: {
      auto g = ground_of_value(v);
      if (g != (k.kind() == CK::WrapRef ? GroundTy::Ref : GroundTy::Vector)) stuck_other("proxy on wrong value");
      return Expr::proxy(k, v);
    }
    case CK::WrapPair:
      if (v.kind() != ExprKind::PairNew) stuck_other("pair proxy on a non-pair");
      return Expr::pair(Expr::coerce(k.first(), v.operand(0)), Expr::coerce(k.second(), v.operand(1)));
  }
  stuck_other("unknown coercion");
}

Expr Machine::contract(const Expr& e) {
  const auto& o = e.operands();
  switch (e.kind()) {
    case ExprKind::Var: stuck_other("free variable " + e.name());
    case ExprKind::App:
      if (o[0].kind() != ExprKind::Fun) stuck_other("application of a non-function");
      return substitute(o[0].operand(0), o[0].name(), o[1]);
    case ExprKind::CoerceApp:
      if (std::holds_alternative<SuspendedCoercion>(e.coercion_slot())) stuck_other("suspended coercion");
      return apply_coercion(e.coercion(), o[0]);
    case ExprKind::Mul: {
      auto a = as_int(o[0]);
      auto b = as_int(o[1]);
      if (!a || !b) stuck_other("multiplication of non-integers");
      return Expr::lit(wrapping_mul(*a, *b));
    }
    case ExprKind::Add: {
      if (auto a = as_int(o[0]), b = as_int(o[1]); a && b) return Expr::lit(wrapping_add(*a, *b));
      if (auto a = as_str(o[0]), b = as_str(o[1]); a && b) return Expr::lit(*a + *b);
      if (o[0].kind() == ExprKind::Box && o[1].kind() == ExprKind::Box) {
        for (const Expr& side : o)
          if (side.ground() != GroundTy::Int && side.ground() != GroundTy::Str)
            stuck_coercion(Coercion::untag(GroundTy::Int), GroundTy::Int, side.ground(), "dynamic + on a non-number");
        if (o[0].ground() != o[1].ground())
          stuck_coercion(Coercion::untag(o[0].ground()), o[0].ground(), o[1].ground(), "dynamic + on mixed operands");
        Expr sum = contract(Expr::add(o[0].operand(0), o[1].operand(0)));
        return Expr::box(o[0].ground(), sum);
      }
      stuck_other("addition of incompatible values");
    }
    case ExprKind::If: {
      const bool* b = o[0].kind() == ExprKind::Lit ? std::get_if<bool>(&o[0].constant()) : nullptr;
      if (!b) stuck_other("conditional on a non-boolean");
      return *b ? o[1] : o[2];
    }
    case ExprKind::Let: return substitute(o[1], e.name(), o[0]);
    case ExprKind::Seq: return o[1];
    case ExprKind::Fix: return substitute(o[0], e.name(), e);
    case ExprKind::RefNew:
      store_.entries.push_back({false, {o[0]}});
      return Expr::cell(store_.entries.size() - 1);
    case ExprKind::Deref:
      if (o[0].kind() == ExprKind::Cell) return store_.entries.at(o[0].address()).slots.at(0);
      if (o[0].kind() == ExprKind::Proxy && o[0].coercion().kind() == Coercion::Kind::WrapRef)
        return Expr::coerce(o[0].coercion().first(), Expr::deref(o[0].operand(0)));
      stuck_other("dereference of a non-reference");
    case ExprKind::SetRef:
      if (o[0].kind() == ExprKind::Cell) {
        store_.entries.at(o[0].address()).slots.at(0) = o[1];
        return Expr::lit(UnitValue{});
      }
      if (o[0].kind() == ExprKind::Proxy && o[0].coercion().kind() == Coercion::Kind::WrapRef)
        return Expr::set_ref(o[0].operand(0), Expr::coerce(o[0].coercion().second(), o[1]));
      stuck_other("assignment through a non-reference");
    case ExprKind::First:
    case ExprKind::Second:
      if (o[0].kind() != ExprKind::PairNew) stuck_other("projection from a non-pair");
      return o[0].operand(e.kind() == ExprKind::First ? 0 : 1);
    case ExprKind::VecNew: {
      auto n = as_int(o[1]);
      if (!n || *n < 0 || static_cast<std::uint64_t>(*n) > kMaxVectorLength) stuck_other("bad vector length");
      store_.entries.push_back({true, std::vector<Expr>(static_cast<std::size_t>(*n), o[0])});
      return Expr::vec_cell(store_.entries.size() - 1);
    }
    case ExprKind::VecGet:
    case ExprKind::VecSet:
    case ExprKind::VecLen: {
      const Expr& vec = o[0];
      if (vec.kind() == ExprKind::Proxy && vec.coercion().kind() == Coercion::Kind::WrapVec) {
        const Coercion& k = vec.coercion();
        const Expr& inner = vec.operand(0);
        if (e.kind() == ExprKind::VecLen) return Expr::vec_len(inner);
        if (e.kind() == ExprKind::VecGet) return Expr::coerce(k.first(), Expr::vec_get(inner, o[1]));
        return Expr::seq(Expr::vec_set(inner, o[1], Expr::coerce(k.second(), o[2])), vec);
      }
      if (vec.kind() != ExprKind::VecCell) stuck_other("vector operation on a non-vector");
      auto& slots = store_.entries.at(vec.address()).slots;
      if (e.kind() == ExprKind::VecLen) return Expr::lit(static_cast<std::int64_t>(slots.size()));
      auto i = as_int(o[1]);
      if (!i || *i < 0 || static_cast<std::uint64_t>(*i) >= slots.size()) stuck_other("vector index out of range");
      if (e.kind() == ExprKind::VecGet) return slots[static_cast<std::size_t>(*i)];
      slots[static_cast<std::size_t>(*i)] = o[2];
      return vec;
    }
    default: break;
  }
  stuck_other("no reduction for " + to_string(e.kind()));
}

Outcome eval(const Expr& e, std::size_t step_limit) {
  Machine m(e);
  while (m.steps() < step_limit) {
    switch (m.step()) {
      case Machine::Status::Done: return {outcome::Val{m.term(), m.store()}, m.steps()};
      case Machine::Status::Stuck: return m.stuck_outcome();
      case Machine::Status::Running: break;
    }
  }
  if (is_value(m.term())) return {outcome::Val{m.term(), m.store()}, m.steps()};
  return {outcome::Timeout{m.steps()}, m.steps()};
}

namespace {

constexpr int kObservationDepth = 24;

Observation observe(const Expr& v, const Store& store, int depth) {
  Observation o;
  if (depth > kObservationDepth) return o;
  switch (v.kind()) {
    case ExprKind::Lit:
      o.kind = Observation::Kind::Base;
      o.constant = v.constant();
      return o;
    case ExprKind::Box:
    case ExprKind::Proxy: return observe(v.operand(0), store, depth);
    case ExprKind::Fun: o.kind = Observation::Kind::Fn; return o;
    case ExprKind::PairNew:
      o.kind = Observation::Kind::Struct;
      o.shape = "pair";
      for (const auto& k : v.operands()) o.children.push_back(observe(k, store, depth + 1));
      return o;
    case ExprKind::Cell:
    case ExprKind::VecCell:
      o.kind = Observation::Kind::Struct;
      o.shape = v.kind() == ExprKind::Cell ? "ref" : "vector";
      if (v.address() < store.entries.size())
        for (const auto& slot : store.entries[v.address()].slots) o.children.push_back(observe(slot, store, depth + 1));
      return o;
    default: return o;
  }
}

}  // namespace

Observation obs(const Expr& value, const Store& store) { return observe(value, store, 0); }

std::string to_string(const Observation& o) {
  switch (o.kind) {
    case Observation::Kind::Base: return to_string(o.constant);
    case Observation::Kind::Fn: return "<fun>";
    case Observation::Kind::Opaque: return "<...>";
    case Observation::Kind::Struct: {
      std::string s = o.shape + "(";
      for (std::size_t i = 0; i < o.children.size(); ++i) s += (i ? ", " : "") + to_string(o.children[i]);
      return s + ")";
    }
  }
  return "?";
}

std::string describe(const Outcome& o) {
  if (const auto* v = std::get_if<outcome::Val>(&o.result)) return "value " + to_string(obs(v->value, v->store));
  if (const auto* s = std::get_if<outcome::StuckCoercion>(&o.result)) {
    std::string found = s->found ? to_string(*s->found) : "untagged";
    return "stuck at " + to_string(s->failed) + " (expected " + to_string(s->expected) + ", found " + found + ")";
  }
  if (const auto* s = std::get_if<outcome::StuckOther>(&o.result)) return "stuck: " + s->reason;
  return "timeout after " + std::to_string(std::get<outcome::Timeout>(o.result).steps) + " steps";
}

bool outcomes_agree(const Outcome& a, const Outcome& b) {
  if (a.is_value() && b.is_value()) {
    const auto& x = std::get<outcome::Val>(a.result);
    const auto& y = std::get<outcome::Val>(b.result);
    return obs(x.value, x.store) == obs(y.value, y.store);
  }
  if (a.is_stuck() && b.is_stuck()) return true;
  return a.is_timeout() && b.is_timeout();
}

}  // namespace migron
