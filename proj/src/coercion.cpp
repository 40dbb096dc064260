#include "migron/coercion.hpp"

#include <stdexcept>

namespace migron {

namespace {

std::shared_ptr<const detail::CoercionNode> make(Coercion::Kind kind, Coercion a = {}, Coercion b = {}) {
  auto n = std::make_shared<detail::CoercionNode>();
  n->kind = kind;
  n->first = std::move(a);
  n->second = std::move(b);
  return n;
}

}  // namespace

Coercion::Coercion() = default;
Coercion::Coercion(std::shared_ptr<const detail::CoercionNode> node) : node_(std::move(node)) {}

Coercion Coercion::id(Typ t) {
  auto n = std::make_shared<detail::CoercionNode>();
  n->type = std::move(t);
  return Coercion(std::move(n));
}

Coercion Coercion::tag(GroundTy g) {
  auto n = std::make_shared<detail::CoercionNode>();
  n->kind = Kind::Tag;
  n->ground = g;
  return Coercion(std::move(n));
}

Coercion Coercion::untag(GroundTy g) {
  auto n = std::make_shared<detail::CoercionNode>();
  n->kind = Kind::Untag;
  n->ground = g;
  return Coercion(std::move(n));
}

Coercion Coercion::wrap(Coercion arg, Coercion result) { return Coercion(make(Kind::Wrap, std::move(arg), std::move(result))); }
Coercion Coercion::seq(Coercion first, Coercion second) { return Coercion(make(Kind::Seq, std::move(first), std::move(second))); }
Coercion Coercion::wrap_ref(Coercion read, Coercion write) { return Coercion(make(Kind::WrapRef, std::move(read), std::move(write))); }
Coercion Coercion::wrap_pair(Coercion left, Coercion right) { return Coercion(make(Kind::WrapPair, std::move(left), std::move(right))); }
Coercion Coercion::wrap_vec(Coercion read, Coercion write) { return Coercion(make(Kind::WrapVec, std::move(read), std::move(write))); }

Coercion::Kind Coercion::kind() const { return node_ ? node_->kind : Kind::Id; }

const Typ& Coercion::id_type() const {
  static const Typ unknown;
  if (!node_) return unknown;
  if (node_->kind != Kind::Id) throw std::logic_error("Coercion::id_type on non-identity");
  return node_->type;
}

GroundTy Coercion::ground() const {
  if (!node_ || (node_->kind != Kind::Tag && node_->kind != Kind::Untag))
    throw std::logic_error("Coercion::ground on non-tag");
  return node_->ground;
}

const Coercion& Coercion::first() const {
  if (!node_ || node_->kind == Kind::Id || node_->kind == Kind::Tag || node_->kind == Kind::Untag)
    throw std::logic_error("Coercion::first on leaf");
  return node_->first;
}

const Coercion& Coercion::second() const {
  if (!node_ || node_->kind == Kind::Id || node_->kind == Kind::Tag || node_->kind == Kind::Untag)
    throw std::logic_error("Coercion::second on leaf");
  return node_->second;
}

bool operator==(const Coercion& a, const Coercion& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Coercion::Kind::Id: return a.id_type() == b.id_type();
    case Coercion::Kind::Tag:
    case Coercion::Kind::Untag: return a.ground() == b.ground();
    default: return a.first() == b.first() && a.second() == b.second();
  }
}

std::string to_string(const Coercion& k) {
  switch (k.kind()) {
    case Coercion::Kind::Id: return "id";
    case Coercion::Kind::Tag: return to_string(k.ground()) + "!";
    case Coercion::Kind::Untag: return to_string(k.ground()) + "?";
    case Coercion::Kind::Wrap: return "wrap(" + to_string(k.first()) + ", " + to_string(k.second()) + ")";
    case Coercion::Kind::WrapRef: return "wrapref(" + to_string(k.first()) + ", " + to_string(k.second()) + ")";
    case Coercion::Kind::WrapPair: return "wrappair(" + to_string(k.first()) + ", " + to_string(k.second()) + ")";
    case Coercion::Kind::WrapVec: return "wrapvec(" + to_string(k.first()) + ", " + to_string(k.second()) + ")";
    case Coercion::Kind::Seq: return to_string(k.first()) + "; " + to_string(k.second());
  }
  return "?";
}

}  // namespace migron
