#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace migron {

enum class BaseType : std::uint8_t { Int, Bool, Str, Unit };

struct MetavarId {
  std::uint32_t value = 0;
  friend auto operator<=>(MetavarId, MetavarId) = default;
};

namespace detail {
struct TypNode;
}

class Typ {
 public:
  enum class Kind : std::uint8_t { Base, Unknown, Arrow, Ref, Pair, Vector, Metavar };

  // Default-constructed Typ is the unknown type.
  Typ();

  static Typ base(BaseType b);
  static Typ integer() { return base(BaseType::Int); }
  static Typ boolean() { return base(BaseType::Bool); }
  static Typ string() { return base(BaseType::Str); }
  static Typ unit() { return base(BaseType::Unit); }
  static Typ unknown();
  static Typ arrow(Typ input, Typ output);
  static Typ ref(Typ content);
  static Typ pair(Typ left, Typ right);
  static Typ vector(Typ elem);
  static Typ metavar(MetavarId id);

  Kind kind() const;
  bool is_unknown() const { return kind() == Kind::Unknown; }
  bool is_metavar() const { return kind() == Kind::Metavar; }
  bool is_base() const { return kind() == Kind::Base; }
  bool is_arrow() const { return kind() == Kind::Arrow; }

  BaseType base_type() const;
  MetavarId metavar_id() const;
  const Typ& input() const;
  const Typ& output() const;
  const Typ& content() const;
  const Typ& left() const;
  const Typ& right() const;
  const Typ& elem() const;

  // Child types in constructor order (0, 1 or 2 of them).
  std::vector<Typ> children() const;
  Typ with_children(const std::vector<Typ>& kids) const;

  bool is_closed() const;
  std::size_t depth() const;

  friend bool operator==(const Typ& a, const Typ& b);
  friend std::strong_ordering operator<=>(const Typ& a, const Typ& b);

 private:
  explicit Typ(std::shared_ptr<const detail::TypNode> node);
  std::shared_ptr<const detail::TypNode> node_;
};

namespace detail {
struct TypNode {
  Typ::Kind kind = Typ::Kind::Unknown;
  BaseType base = BaseType::Int;
  MetavarId id{};
  Typ first;
  Typ second;
};
}  // namespace detail

enum class GroundTy : std::uint8_t { Int, Bool, Str, Unit, Fun, Ref, Pair, Vector };

Typ ground_type(GroundTy g);
// Ground shape of the outermost constructor; nullopt for the unknown type and metavariables.
std::optional<GroundTy> ground_of(const Typ& t);
bool is_ground(const Typ& t);
std::vector<GroundTy> all_grounds();

bool consistent(const Typ& s, const Typ& t);
bool type_precision(const Typ& less, const Typ& more);

void collect_metavars(const Typ& t, std::vector<MetavarId>& out);

std::string to_string(BaseType b);
std::string to_string(GroundTy g);
// Concrete syntax; metavariables render as ?N.
std::string to_string(const Typ& t);

}  // namespace migron
