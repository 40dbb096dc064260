#include "migron/constraint.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "migron/error.hpp"

namespace migron {

using Node = detail::ConstraintNode;

Constraint::Constraint() = default;
Constraint::Constraint(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Constraint Constraint::eq(Typ lhs, Typ rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::TypEq;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Constraint(std::move(n));
}

Constraint Constraint::weight(WeightId w) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Weight;
  n->weight = w;
  return Constraint(std::move(n));
}

Constraint Constraint::conj(std::vector<Constraint> parts) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->operands = std::move(parts);
  return Constraint(std::move(n));
}

Constraint Constraint::disj(std::vector<Constraint> parts) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->operands = std::move(parts);
  return Constraint(std::move(n));
}

Constraint Constraint::negate(Constraint c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->operands = {std::move(c)};
  return Constraint(std::move(n));
}

Constraint Constraint::is_ground(Typ t) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::IsGround;
  n->lhs = std::move(t);
  return Constraint(std::move(n));
}

Constraint Constraint::path_unknown(Typ root, std::vector<PathStep> path) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::PathUnknown;
  n->lhs = std::move(root);
  n->path = std::move(path);
  return Constraint(std::move(n));
}

Constraint::Kind Constraint::kind() const { return node_ ? node_->kind : Kind::True; }

namespace {

const Node& checked(const std::shared_ptr<const Node>& n, std::initializer_list<Constraint::Kind> kinds) {
  if (!n || std::find(kinds.begin(), kinds.end(), n->kind) == kinds.end())
    throw std::logic_error("constraint accessor on wrong kind");
  return *n;
}

}  // namespace

const Typ& Constraint::lhs() const { return checked(node_, {Kind::TypEq}).lhs; }
const Typ& Constraint::rhs() const { return checked(node_, {Kind::TypEq}).rhs; }
const Typ& Constraint::subject() const { return checked(node_, {Kind::IsGround, Kind::PathUnknown}).lhs; }
WeightId Constraint::weight_id() const { return checked(node_, {Kind::Weight}).weight; }

const std::vector<Constraint>& Constraint::operands() const {
  static const std::vector<Constraint> none;
  return node_ ? node_->operands : none;
}

const std::vector<PathStep>& Constraint::path() const { return checked(node_, {Kind::PathUnknown}).path; }

Typ Model::apply(const Typ& t) const {
  if (t.is_metavar()) {
    auto it = types.find(t.metavar_id());
    if (it == types.end()) throw MissingAssignment(t.metavar_id());
    return apply(it->second);
  }
  auto kids = t.children();
  if (kids.empty()) return t;
  for (auto& k : kids) k = apply(k);
  return t.with_children(kids);
}

bool Model::weight(WeightId w) const {
  auto it = weights.find(w);
  return it != weights.end() && it->second;
}

std::size_t Model::satisfied(const std::vector<WeightId>& ws) const {
  return static_cast<std::size_t>(std::count_if(ws.begin(), ws.end(), [&](WeightId w) { return weight(w); }));
}

std::optional<Typ> follow_path(const Typ& t, const std::vector<PathStep>& path) {
  Typ cur = t;
  for (PathStep s : path) {
    switch (s) {
      case PathStep::ArrowIn:
      case PathStep::ArrowOut:
        if (cur.kind() != Typ::Kind::Arrow) return std::nullopt;
        cur = s == PathStep::ArrowIn ? cur.input() : cur.output();
        break;
      case PathStep::RefContent:
        if (cur.kind() != Typ::Kind::Ref) return std::nullopt;
        cur = cur.content();
        break;
      case PathStep::PairLeft:
      case PathStep::PairRight:
        if (cur.kind() != Typ::Kind::Pair) return std::nullopt;
        cur = s == PathStep::PairLeft ? cur.left() : cur.right();
        break;
      case PathStep::VectorElem:
        if (cur.kind() != Typ::Kind::Vector) return std::nullopt;
        cur = cur.elem();
        break;
    }
  }
  return cur;
}

bool evaluate(const Constraint& c, const Model& m) {
  using K = Constraint::Kind;
  switch (c.kind()) {
    case K::True: return true;
    case K::TypEq: return m.apply(c.lhs()) == m.apply(c.rhs());
    case K::Weight: return m.weight(c.weight_id());
    case K::And:
      return std::all_of(c.operands().begin(), c.operands().end(), [&](const Constraint& k) { return evaluate(k, m); });
    case K::Or:
      return std::any_of(c.operands().begin(), c.operands().end(), [&](const Constraint& k) { return evaluate(k, m); });
    case K::Not: return !evaluate(c.operands().front(), m);
    case K::IsGround: return migron::is_ground(m.apply(c.subject()));
    case K::PathUnknown: {
      auto reached = follow_path(m.apply(c.subject()), c.path());
      return !reached || reached->is_unknown();
    }
  }
  return false;
}

namespace {

void walk(const Constraint& c, std::set<MetavarId>& vars, std::set<WeightId>& ws) {
  using K = Constraint::Kind;
  std::vector<MetavarId> found;
  switch (c.kind()) {
    case K::TypEq:
      collect_metavars(c.lhs(), found);
      collect_metavars(c.rhs(), found);
      break;
    case K::IsGround:
    case K::PathUnknown: collect_metavars(c.subject(), found); break;
    case K::Weight: ws.insert(c.weight_id()); break;
    default: break;
  }
  vars.insert(found.begin(), found.end());
  for (const auto& k : c.operands()) walk(k, vars, ws);
}

std::string step_name(PathStep s) {
  switch (s) {
    case PathStep::ArrowIn: return "in";
    case PathStep::ArrowOut: return "out";
    case PathStep::RefContent: return "to";
    case PathStep::PairLeft: return "left";
    case PathStep::PairRight: return "right";
    case PathStep::VectorElem: return "elem";
  }
  return "?";
}

}  // namespace

std::vector<MetavarId> constraint_metavars(const Constraint& c) {
  std::set<MetavarId> vars;
  std::set<WeightId> ws;
  walk(c, vars, ws);
  return {vars.begin(), vars.end()};
}

std::vector<WeightId> constraint_weights(const Constraint& c) {
  std::set<MetavarId> vars;
  std::set<WeightId> ws;
  walk(c, vars, ws);
  return {ws.begin(), ws.end()};
}

std::string to_string(const Constraint& c) {
  using K = Constraint::Kind;
  auto join = [&](const char* op) {
    std::string s = "(";
    for (std::size_t i = 0; i < c.operands().size(); ++i) s += (i ? op : "") + to_string(c.operands()[i]);
    return s + ")";
  };
  switch (c.kind()) {
    case K::True: return "true";
    case K::TypEq: return to_string(c.lhs()) + " = " + to_string(c.rhs());
    case K::Weight: return "w" + std::to_string(c.weight_id().value);
    case K::And: return join(" & ");
    case K::Or: return join(" | ");
    case K::Not: return "!" + to_string(c.operands().front());
    case K::IsGround: return "ground(" + to_string(c.subject()) + ")";
    case K::PathUnknown: {
      std::string s = to_string(c.subject());
      for (PathStep p : c.path()) s = step_name(p) + "(" + s + ")";
      return s + " = any";
    }
  }
  return "?";
}

}  // namespace migron
