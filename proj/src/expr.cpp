#include "migron/expr.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace migron {

Typ type_of(const Constant& c) {
  switch (c.index()) {
    case 0: return Typ::integer();
    case 1: return Typ::boolean();
    case 2: return Typ::string();
    default: return Typ::unit();
  }
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += ch;
    }
  }
  return out + "\"";
}

}  // namespace

std::string to_string(const Constant& c) {
  switch (c.index()) {
    case 0: return std::to_string(std::get<std::int64_t>(c));
    case 1: return std::get<bool>(c) ? "true" : "false";
    case 2: return quote(std::get<std::string>(c));
    default: return "()";
  }
}

std::string to_string(ExprKind k) {
  static const char* names[] = {"Var",    "Lit",    "Fun",    "App",     "Mul",   "Add",    "If",
                                "Let",    "Seq",    "Fix",    "RefNew",  "Deref", "SetRef", "PairNew",
                                "First",  "Second", "VecNew", "VecGet",  "VecSet", "VecLen", "CoerceApp",
                                "Box",    "Cell",   "VecCell", "Proxy"};
  return names[static_cast<int>(k)];
}

namespace {

using Node = detail::ExprNode;

std::shared_ptr<Node> node(ExprKind kind, std::vector<Expr> kids, SourceLoc loc) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->operands = std::move(kids);
  n->loc = loc;
  return n;
}

}  // namespace

Expr::Expr() = default;
Expr::Expr(std::shared_ptr<const detail::ExprNode> node) : node_(std::move(node)) {}

Expr Expr::var(std::string name, SourceLoc loc) {
  auto n = node(ExprKind::Var, {}, loc);
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::lit(Constant c, SourceLoc loc) {
  auto n = node(ExprKind::Lit, {}, loc);
  n->constant = std::move(c);
  return Expr(std::move(n));
}

Expr Expr::fun(std::string param, Typ annotation, Expr body, SourceLoc loc) {
  auto n = node(ExprKind::Fun, {std::move(body)}, loc);
  n->name = std::move(param);
  n->annotation = std::move(annotation);
  return Expr(std::move(n));
}

Expr Expr::app(Expr fn, Expr arg, SourceLoc loc) { return Expr(node(ExprKind::App, {std::move(fn), std::move(arg)}, loc)); }
Expr Expr::mul(Expr a, Expr b, SourceLoc loc) { return Expr(node(ExprKind::Mul, {std::move(a), std::move(b)}, loc)); }
Expr Expr::add(Expr a, Expr b, SourceLoc loc) { return Expr(node(ExprKind::Add, {std::move(a), std::move(b)}, loc)); }

Expr Expr::if_(Expr cond, Expr then_branch, Expr else_branch, SourceLoc loc) {
  return Expr(node(ExprKind::If, {std::move(cond), std::move(then_branch), std::move(else_branch)}, loc));
}

Expr Expr::let(std::string name, Expr bound, Expr body, SourceLoc loc) {
  auto n = node(ExprKind::Let, {std::move(bound), std::move(body)}, loc);
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::seq(Expr first, Expr second, SourceLoc loc) { return Expr(node(ExprKind::Seq, {std::move(first), std::move(second)}, loc)); }

Expr Expr::fix(std::string name, Typ annotation, Expr body, SourceLoc loc) {
  auto n = node(ExprKind::Fix, {std::move(body)}, loc);
  n->name = std::move(name);
  n->annotation = std::move(annotation);
  return Expr(std::move(n));
}

Expr Expr::ref_new(Expr init, SourceLoc loc) { return Expr(node(ExprKind::RefNew, {std::move(init)}, loc)); }
Expr Expr::deref(Expr ref, SourceLoc loc) { return Expr(node(ExprKind::Deref, {std::move(ref)}, loc)); }
Expr Expr::set_ref(Expr ref, Expr value, SourceLoc loc) { return Expr(node(ExprKind::SetRef, {std::move(ref), std::move(value)}, loc)); }
Expr Expr::pair(Expr left, Expr right, SourceLoc loc) { return Expr(node(ExprKind::PairNew, {std::move(left), std::move(right)}, loc)); }
Expr Expr::first(Expr pair, SourceLoc loc) { return Expr(node(ExprKind::First, {std::move(pair)}, loc)); }
Expr Expr::second(Expr pair, SourceLoc loc) { return Expr(node(ExprKind::Second, {std::move(pair)}, loc)); }
Expr Expr::vec_new(Expr init, Expr size, SourceLoc loc) { return Expr(node(ExprKind::VecNew, {std::move(init), std::move(size)}, loc)); }
Expr Expr::vec_get(Expr vec, Expr index, SourceLoc loc) { return Expr(node(ExprKind::VecGet, {std::move(vec), std::move(index)}, loc)); }

Expr Expr::vec_set(Expr vec, Expr index, Expr value, SourceLoc loc) {
  return Expr(node(ExprKind::VecSet, {std::move(vec), std::move(index), std::move(value)}, loc));
}

Expr Expr::vec_len(Expr vec, SourceLoc loc) { return Expr(node(ExprKind::VecLen, {std::move(vec)}, loc)); }

Expr Expr::coerce(CoercionSlot coercion, Expr body, SourceLoc loc) {
  auto n = node(ExprKind::CoerceApp, {std::move(body)}, loc);
  n->coercion = std::move(coercion);
  return Expr(std::move(n));
}

Expr Expr::box(GroundTy g, Expr payload) {
  auto n = node(ExprKind::Box, {std::move(payload)}, {});
  n->ground = g;
  return Expr(std::move(n));
}

Expr Expr::cell(std::size_t address) {
  auto n = node(ExprKind::Cell, {}, {});
  n->address = address;
  return Expr(std::move(n));
}

Expr Expr::vec_cell(std::size_t address) {
  auto n = node(ExprKind::VecCell, {}, {});
  n->address = address;
  return Expr(std::move(n));
}

Expr Expr::proxy(Coercion k, Expr inner) {
  auto n = node(ExprKind::Proxy, {std::move(inner)}, {});
  n->coercion = std::move(k);
  return Expr(std::move(n));
}

namespace {

const Node& unit_node() {
  static const Node n;
  return n;
}

const Node& node_of(const std::shared_ptr<const Node>& p) { return p ? *p : unit_node(); }

}  // namespace

ExprKind Expr::kind() const { return node_of(node_).kind; }
const std::string& Expr::name() const { return node_of(node_).name; }
const Typ& Expr::annotation() const { return node_of(node_).annotation; }
const Constant& Expr::constant() const { return node_of(node_).constant; }
const std::vector<Expr>& Expr::operands() const { return node_of(node_).operands; }
const CoercionSlot& Expr::coercion_slot() const { return node_of(node_).coercion; }

const Coercion& Expr::coercion() const {
  const auto* k = std::get_if<Coercion>(&node_of(node_).coercion);
  if (!k) throw std::logic_error("coercion is still suspended");
  return *k;
}

GroundTy Expr::ground() const { return node_of(node_).ground; }
std::size_t Expr::address() const { return node_of(node_).address; }
SourceLoc Expr::loc() const { return node_of(node_).loc; }

Expr Expr::with_operands(std::vector<Expr> kids) const {
  auto n = std::make_shared<Node>(node_of(node_));
  n->operands = std::move(kids);
  return Expr(std::move(n));
}

Expr Expr::with_annotation(Typ t) const {
  auto n = std::make_shared<Node>(node_of(node_));
  n->annotation = std::move(t);
  return Expr(std::move(n));
}

Expr Expr::with_name(std::string name) const {
  auto n = std::make_shared<Node>(node_of(node_));
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::with_coercion(CoercionSlot k) const {
  auto n = std::make_shared<Node>(node_of(node_));
  n->coercion = std::move(k);
  return Expr(std::move(n));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const Node& x = node_of(a.node_);
  const Node& y = node_of(b.node_);
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case ExprKind::Var:
    case ExprKind::Let: if (x.name != y.name) return false; break;
    case ExprKind::Fun:
    case ExprKind::Fix: if (x.name != y.name || x.annotation != y.annotation) return false; break;
    case ExprKind::Lit: if (x.constant != y.constant) return false; break;
    case ExprKind::CoerceApp:
    case ExprKind::Proxy: if (x.coercion != y.coercion) return false; break;
    case ExprKind::Box: if (x.ground != y.ground) return false; break;
    case ExprKind::Cell:
    case ExprKind::VecCell: if (x.address != y.address) return false; break;
    default: break;
  }
  return x.operands == y.operands;
}

bool binds_in(const Expr& e, std::size_t operand_index) {
  switch (e.kind()) {
    case ExprKind::Fun:
    case ExprKind::Fix: return operand_index == 0;
    case ExprKind::Let: return operand_index == 1;
    default: return false;
  }
}

namespace {

void free_vars_into(const Expr& e, std::vector<std::string>& bound, std::set<std::string>& out) {
  if (e.kind() == ExprKind::Var) {
    if (std::find(bound.begin(), bound.end(), e.name()) == bound.end()) out.insert(e.name());
    return;
  }
  for (std::size_t i = 0; i < e.operands().size(); ++i) {
    bool binds = binds_in(e, i);
    if (binds) bound.push_back(e.name());
    free_vars_into(e.operand(i), bound, out);
    if (binds) bound.pop_back();
  }
}

}  // namespace

std::vector<std::string> free_vars(const Expr& e) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  free_vars_into(e, bound, out);
  return {out.begin(), out.end()};
}

bool is_surface(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::CoerceApp:
    case ExprKind::Box:
    case ExprKind::Cell:
    case ExprKind::VecCell:
    case ExprKind::Proxy: return false;
    default: break;
  }
  return std::all_of(e.operands().begin(), e.operands().end(), is_surface);
}

Expr erase_coercions(const Expr& e) {
  if (e.kind() == ExprKind::CoerceApp) return erase_coercions(e.operand(0));
  return map_expr(e, [](const Expr& n) { return n.kind() == ExprKind::CoerceApp ? n.operand(0) : n; });
}

bool expr_precision(const Expr& less, const Expr& more) {
  if (less.kind() != more.kind() || less.operands().size() != more.operands().size()) return false;
  switch (less.kind()) {
    case ExprKind::Var:
    case ExprKind::Let:
      if (less.name() != more.name()) return false;
      break;
    case ExprKind::Fun:
    case ExprKind::Fix:
      if (less.name() != more.name() || !type_precision(less.annotation(), more.annotation())) return false;
      break;
    case ExprKind::Lit:
      if (less.constant() != more.constant()) return false;
      break;
    default:
      if (!is_surface(less) || !is_surface(more)) return false;
      break;
  }
  for (std::size_t i = 0; i < less.operands().size(); ++i)
    if (!expr_precision(less.operand(i), more.operand(i))) return false;
  return true;
}

namespace {

void binders_into(const Expr& e, std::vector<BinderAnnotation>& out) {
  if (e.kind() == ExprKind::Fun || e.kind() == ExprKind::Fix) out.push_back({e.name(), e.annotation()});
  for (const auto& k : e.operands()) binders_into(k, out);
}

}  // namespace

std::vector<BinderAnnotation> binder_annotations(const Expr& e) {
  std::vector<BinderAnnotation> out;
  binders_into(e, out);
  return out;
}

}  // namespace migron
