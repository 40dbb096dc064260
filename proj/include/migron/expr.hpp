#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "migron/coercion.hpp"
#include "migron/types.hpp"

namespace migron {

struct UnitValue {
  friend bool operator==(UnitValue, UnitValue) { return true; }
};

using Constant = std::variant<std::int64_t, bool, std::string, UnitValue>;

Typ type_of(const Constant& c);
std::string to_string(const Constant& c);

struct SuspendedCoercion {
  Typ source;
  Typ target;
  friend bool operator==(const SuspendedCoercion&, const SuspendedCoercion&) = default;
};

using CoercionSlot = std::variant<SuspendedCoercion, Coercion>;

struct SourceLoc {
  int line = 0;
  int column = 0;
};

enum class ExprKind : std::uint8_t {
  Var, Lit, Fun, App, Mul, Add, If, Let, Seq, Fix,
  RefNew, Deref, SetRef, PairNew, First, Second,
  VecNew, VecGet, VecSet, VecLen, CoerceApp,
  // Only produced while evaluating.
  Box, Cell, VecCell, Proxy,
};

std::string to_string(ExprKind k);

namespace detail {
struct ExprNode;
}

class Expr {
 public:
  Expr();  // unit literal

  static Expr var(std::string name, SourceLoc loc = {});
  static Expr lit(Constant c, SourceLoc loc = {});
  static Expr fun(std::string param, Typ annotation, Expr body, SourceLoc loc = {});
  static Expr app(Expr fn, Expr arg, SourceLoc loc = {});
  static Expr mul(Expr a, Expr b, SourceLoc loc = {});
  static Expr add(Expr a, Expr b, SourceLoc loc = {});
  static Expr if_(Expr cond, Expr then_branch, Expr else_branch, SourceLoc loc = {});
  static Expr let(std::string name, Expr bound, Expr body, SourceLoc loc = {});
  static Expr seq(Expr first, Expr second, SourceLoc loc = {});
  static Expr fix(std::string name, Typ annotation, Expr body, SourceLoc loc = {});
  static Expr ref_new(Expr init, SourceLoc loc = {});
  static Expr deref(Expr ref, SourceLoc loc = {});
  static Expr set_ref(Expr ref, Expr value, SourceLoc loc = {});
  static Expr pair(Expr left, Expr right, SourceLoc loc = {});
  static Expr first(Expr pair, SourceLoc loc = {});
  static Expr second(Expr pair, SourceLoc loc = {});
  static Expr vec_new(Expr init, Expr size, SourceLoc loc = {});
  static Expr vec_get(Expr vec, Expr index, SourceLoc loc = {});
  static Expr vec_set(Expr vec, Expr index, Expr value, SourceLoc loc = {});
  static Expr vec_len(Expr vec, SourceLoc loc = {});
  static Expr coerce(CoercionSlot coercion, Expr body, SourceLoc loc = {});
  static Expr box(GroundTy g, Expr payload);
  static Expr cell(std::size_t address);
  static Expr vec_cell(std::size_t address);
  static Expr proxy(Coercion k, Expr inner);

  ExprKind kind() const;
  const std::string& name() const;
  const Typ& annotation() const;
  const Constant& constant() const;
  const std::vector<Expr>& operands() const;
  const Expr& operand(std::size_t i) const { return operands().at(i); }
  const CoercionSlot& coercion_slot() const;
  // The coercion of a resolved CoerceApp or a Proxy.
  const Coercion& coercion() const;
  GroundTy ground() const;
  std::size_t address() const;
  SourceLoc loc() const;

  Expr with_operands(std::vector<Expr> kids) const;
  Expr with_annotation(Typ t) const;
  Expr with_name(std::string name) const;
  Expr with_coercion(CoercionSlot k) const;

  // Structural equality; source locations are ignored.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const detail::ExprNode> node);
  std::shared_ptr<const detail::ExprNode> node_;
};

namespace detail {
struct ExprNode {
  ExprKind kind = ExprKind::Lit;
  std::string name;
  Typ annotation;
  Constant constant = UnitValue{};
  std::vector<Expr> operands;
  CoercionSlot coercion = Coercion{};
  GroundTy ground = GroundTy::Int;
  std::size_t address = 0;
  SourceLoc loc;
};
}  // namespace detail

// Binding forms: Fun and Fix bind name() in operand 0; Let binds name() in operand 1.
bool binds_in(const Expr& e, std::size_t operand_index);

std::vector<std::string> free_vars(const Expr& e);
bool is_surface(const Expr& e);
Expr erase_coercions(const Expr& e);
bool expr_precision(const Expr& less, const Expr& more);

struct BinderAnnotation {
  std::string name;
  Typ type;
};
// Fun and Fix annotations in pre-order.
std::vector<BinderAnnotation> binder_annotations(const Expr& e);

// Rebuilds e bottom-up, applying f to each node after its operands are rebuilt.
template <typename F>
Expr map_expr(const Expr& e, F&& f) {
  std::vector<Expr> kids;
  kids.reserve(e.operands().size());
  for (const auto& k : e.operands()) kids.push_back(map_expr(k, f));
  return f(kids.empty() ? e : e.with_operands(std::move(kids)));
}

}  // namespace migron
