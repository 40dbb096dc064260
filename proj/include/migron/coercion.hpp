#pragma once

#include <memory>
#include <string>

#include "migron/types.hpp"

namespace migron {

namespace detail {
struct CoercionNode;
}

// Runtime casts. Besides the function proxy `wrap`, references, pairs and
// vectors get their own proxies: wrapref(read, write), wrappair(l, r),
// wrapvec(read, write).
class Coercion {
 public:
  enum class Kind : std::uint8_t { Id, Tag, Untag, Wrap, Seq, WrapRef, WrapPair, WrapVec };

  // id at the unknown type
  Coercion();

  static Coercion id(Typ t);
  static Coercion tag(GroundTy g);
  static Coercion untag(GroundTy g);
  static Coercion wrap(Coercion arg, Coercion result);
  static Coercion seq(Coercion first, Coercion second);
  static Coercion wrap_ref(Coercion read, Coercion write);
  static Coercion wrap_pair(Coercion left, Coercion right);
  static Coercion wrap_vec(Coercion read, Coercion write);

  Kind kind() const;
  bool is_identity() const { return kind() == Kind::Id; }
  const Typ& id_type() const;
  GroundTy ground() const;
  // Operands of wrap/seq/wrapref/wrappair/wrapvec, in constructor order.
  const Coercion& first() const;
  const Coercion& second() const;

  friend bool operator==(const Coercion& a, const Coercion& b);

 private:
  explicit Coercion(std::shared_ptr<const detail::CoercionNode> node);
  std::shared_ptr<const detail::CoercionNode> node_;
};

namespace detail {
struct CoercionNode {
  Coercion::Kind kind = Coercion::Kind::Id;
  Typ type;
  GroundTy ground = GroundTy::Int;
  Coercion first;
  Coercion second;
};
}  // namespace detail

std::string to_string(const Coercion& k);

}  // namespace migron
