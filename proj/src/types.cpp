#include "migron/types.hpp"

#include <stdexcept>

namespace migron {

namespace {

std::shared_ptr<const detail::TypNode> make_node(Typ::Kind kind, Typ first = {}, Typ second = {}) {
  auto node = std::make_shared<detail::TypNode>();
  node->kind = kind;
  node->first = std::move(first);
  node->second = std::move(second);
  return node;
}

const detail::TypNode& expect(const std::shared_ptr<const detail::TypNode>& node, Typ::Kind kind,
                              const char* what) {
  if (!node || node->kind != kind) throw std::logic_error(std::string("Typ::") + what + " on wrong kind");
  return *node;
}

}  // namespace

Typ::Typ() = default;
Typ::Typ(std::shared_ptr<const detail::TypNode> node) : node_(std::move(node)) {}

Typ Typ::base(BaseType b) {
  static const std::shared_ptr<const detail::TypNode> nodes[] = {
      [] { auto n = std::make_shared<detail::TypNode>(); n->kind = Kind::Base; n->base = BaseType::Int; return n; }(),
      [] { auto n = std::make_shared<detail::TypNode>(); n->kind = Kind::Base; n->base = BaseType::Bool; return n; }(),
      [] { auto n = std::make_shared<detail::TypNode>(); n->kind = Kind::Base; n->base = BaseType::Str; return n; }(),
      [] { auto n = std::make_shared<detail::TypNode>(); n->kind = Kind::Base; n->base = BaseType::Unit; return n; }(),
  };
  return Typ(nodes[static_cast<int>(b)]);
}

Typ Typ::unknown() { return Typ(); }
Typ Typ::arrow(Typ input, Typ output) { return Typ(make_node(Kind::Arrow, std::move(input), std::move(output))); }
Typ Typ::ref(Typ content) { return Typ(make_node(Kind::Ref, std::move(content))); }
Typ Typ::pair(Typ left, Typ right) { return Typ(make_node(Kind::Pair, std::move(left), std::move(right))); }
Typ Typ::vector(Typ elem) { return Typ(make_node(Kind::Vector, std::move(elem))); }

Typ Typ::metavar(MetavarId id) {
  auto node = std::make_shared<detail::TypNode>();
  node->kind = Kind::Metavar;
  node->id = id;
  return Typ(std::move(node));
}

Typ::Kind Typ::kind() const { return node_ ? node_->kind : Kind::Unknown; }
BaseType Typ::base_type() const { return expect(node_, Kind::Base, "base_type").base; }
MetavarId Typ::metavar_id() const { return expect(node_, Kind::Metavar, "metavar_id").id; }
const Typ& Typ::input() const { return expect(node_, Kind::Arrow, "input").first; }
const Typ& Typ::output() const { return expect(node_, Kind::Arrow, "output").second; }
const Typ& Typ::content() const { return expect(node_, Kind::Ref, "content").first; }
const Typ& Typ::left() const { return expect(node_, Kind::Pair, "left").first; }
const Typ& Typ::right() const { return expect(node_, Kind::Pair, "right").second; }
const Typ& Typ::elem() const { return expect(node_, Kind::Vector, "elem").first; }

std::vector<Typ> Typ::children() const {
  switch (kind()) {
    case Kind::Arrow:
    case Kind::Pair:
      return {node_->first, node_->second};
    case Kind::Ref:
    case Kind::Vector:
      return {node_->first};
    default:
      return {};
  }
}

Typ Typ::with_children(const std::vector<Typ>& kids) const {
  switch (kind()) {
    case Kind::Arrow: return arrow(kids.at(0), kids.at(1));
    case Kind::Pair: return pair(kids.at(0), kids.at(1));
    case Kind::Ref: return ref(kids.at(0));
    case Kind::Vector: return vector(kids.at(0));
    default: return *this;
  }
}

bool Typ::is_closed() const {
  switch (kind()) {
    case Kind::Metavar: return false;
    case Kind::Arrow:
    case Kind::Pair: return node_->first.is_closed() && node_->second.is_closed();
    case Kind::Ref:
    case Kind::Vector: return node_->first.is_closed();
    default: return true;
  }
}

std::size_t Typ::depth() const {
  std::size_t d = 0;
  for (const auto& c : children()) d = std::max(d, c.depth());
  return children().empty() ? 0 : d + 1;
}

bool operator==(const Typ& a, const Typ& b) { return (a <=> b) == std::strong_ordering::equal; }

std::strong_ordering operator<=>(const Typ& a, const Typ& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Typ::Kind::Base: return a.node_->base <=> b.node_->base;
    case Typ::Kind::Metavar: return a.node_->id <=> b.node_->id;
    case Typ::Kind::Unknown: return std::strong_ordering::equal;
    default: break;
  }
  if (auto c = a.node_->first <=> b.node_->first; c != 0) return c;
  return a.node_->second <=> b.node_->second;
}

Typ ground_type(GroundTy g) {
  switch (g) {
    case GroundTy::Int: return Typ::integer();
    case GroundTy::Bool: return Typ::boolean();
    case GroundTy::Str: return Typ::string();
    case GroundTy::Unit: return Typ::unit();
    case GroundTy::Fun: return Typ::arrow(Typ::unknown(), Typ::unknown());
    case GroundTy::Ref: return Typ::ref(Typ::unknown());
    case GroundTy::Pair: return Typ::pair(Typ::unknown(), Typ::unknown());
    case GroundTy::Vector: return Typ::vector(Typ::unknown());
  }
  throw std::logic_error("bad ground");
}

std::optional<GroundTy> ground_of(const Typ& t) {
  switch (t.kind()) {
    case Typ::Kind::Base:
      switch (t.base_type()) {
        case BaseType::Int: return GroundTy::Int;
        case BaseType::Bool: return GroundTy::Bool;
        case BaseType::Str: return GroundTy::Str;
        case BaseType::Unit: return GroundTy::Unit;
      }
      break;
    case Typ::Kind::Arrow: return GroundTy::Fun;
    case Typ::Kind::Ref: return GroundTy::Ref;
    case Typ::Kind::Pair: return GroundTy::Pair;
    case Typ::Kind::Vector: return GroundTy::Vector;
    default: break;
  }
  return std::nullopt;
}

bool is_ground(const Typ& t) {
  auto g = ground_of(t);
  return g && ground_type(*g) == t;
}

std::vector<GroundTy> all_grounds() {
  return {GroundTy::Int, GroundTy::Bool, GroundTy::Str,  GroundTy::Unit,
          GroundTy::Fun, GroundTy::Ref,  GroundTy::Pair, GroundTy::Vector};
}

bool consistent(const Typ& s, const Typ& t) {
  if (s.is_unknown() || t.is_unknown()) return true;
  if (s.kind() != t.kind()) return false;
  if (s.is_base()) return s.base_type() == t.base_type();
  if (s.is_metavar()) return s == t;
  auto sk = s.children();
  auto tk = t.children();
  for (std::size_t i = 0; i < sk.size(); ++i)
    if (!consistent(sk[i], tk[i])) return false;
  return true;
}

bool type_precision(const Typ& less, const Typ& more) {
  if (less.is_unknown()) return true;
  if (less.kind() != more.kind()) return false;
  if (less.is_base()) return less.base_type() == more.base_type();
  if (less.is_metavar()) return less == more;
  auto lk = less.children();
  auto mk = more.children();
  for (std::size_t i = 0; i < lk.size(); ++i)
    if (!type_precision(lk[i], mk[i])) return false;
  return true;
}

void collect_metavars(const Typ& t, std::vector<MetavarId>& out) {
  if (t.is_metavar()) {
    out.push_back(t.metavar_id());
    return;
  }
  for (const auto& c : t.children()) collect_metavars(c, out);
}

std::string to_string(BaseType b) {
  switch (b) {
    case BaseType::Int: return "int";
    case BaseType::Bool: return "bool";
    case BaseType::Str: return "str";
    case BaseType::Unit: return "unit";
  }
  return "?";
}

std::string to_string(GroundTy g) {
  switch (g) {
    case GroundTy::Int: return "int";
    case GroundTy::Bool: return "bool";
    case GroundTy::Str: return "str";
    case GroundTy::Unit: return "unit";
    case GroundTy::Fun: return "fun";
    case GroundTy::Ref: return "ref";
    case GroundTy::Pair: return "pair";
    case GroundTy::Vector: return "vec";
  }
  return "?";
}

namespace {

std::string print_type(const Typ& t, bool atom) {
  std::string s;
  switch (t.kind()) {
    case Typ::Kind::Base: return to_string(t.base_type());
    case Typ::Kind::Unknown: return "any";
    case Typ::Kind::Metavar: return "?" + std::to_string(t.metavar_id().value);
    case Typ::Kind::Pair: return "(" + print_type(t.left(), false) + ", " + print_type(t.right(), false) + ")";
    case Typ::Kind::Arrow: s = print_type(t.input(), true) + " -> " + print_type(t.output(), false); break;
    case Typ::Kind::Ref: s = "ref " + print_type(t.content(), true); break;
    case Typ::Kind::Vector: s = "vec " + print_type(t.elem(), true); break;
  }
  return atom ? "(" + s + ")" : s;
}

}  // namespace

std::string to_string(const Typ& t) { return print_type(t, false); }

}  // namespace migron
