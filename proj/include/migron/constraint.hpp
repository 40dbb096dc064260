#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "migron/types.hpp"

namespace migron {

struct WeightId {
  std::uint32_t value = 0;
  friend auto operator<=>(WeightId, WeightId) = default;
};

// One constructor step from a type to one of its components.
enum class PathStep : std::uint8_t { ArrowIn, ArrowOut, RefContent, PairLeft, PairRight, VectorElem };

namespace detail {
struct ConstraintNode;
}

class Constraint {
 public:
  enum class Kind : std::uint8_t { True, TypEq, Weight, And, Or, Not, IsGround, PathUnknown };

  Constraint();  // True

  static Constraint truth() { return {}; }
  static Constraint eq(Typ lhs, Typ rhs);
  static Constraint weight(WeightId w);
  static Constraint conj(std::vector<Constraint> parts);
  static Constraint disj(std::vector<Constraint> parts);
  static Constraint negate(Constraint c);
  static Constraint is_ground(Typ t);
  // If `root` follows `path` constructor by constructor, the component reached is ⋆.
  static Constraint path_unknown(Typ root, std::vector<PathStep> path);

  Kind kind() const;
  const Typ& lhs() const;  // TypEq
  const Typ& rhs() const;  // TypEq
  const Typ& subject() const;  // IsGround, PathUnknown
  WeightId weight_id() const;
  const std::vector<Constraint>& operands() const;
  const std::vector<PathStep>& path() const;

 private:
  explicit Constraint(std::shared_ptr<const detail::ConstraintNode> node);
  std::shared_ptr<const detail::ConstraintNode> node_;
};

namespace detail {
struct ConstraintNode {
  Constraint::Kind kind = Constraint::Kind::True;
  Typ lhs;
  Typ rhs;
  WeightId weight;
  std::vector<Constraint> operands;
  std::vector<PathStep> path;
};
}  // namespace detail

inline Constraint operator&&(Constraint a, Constraint b) { return Constraint::conj({std::move(a), std::move(b)}); }
inline Constraint operator||(Constraint a, Constraint b) { return Constraint::disj({std::move(a), std::move(b)}); }
inline Constraint operator!(Constraint a) { return Constraint::negate(std::move(a)); }

// Metavariable-free assignment plus weight truth values.
struct Model {
  std::map<MetavarId, Typ> types;
  std::map<WeightId, bool> weights;

  // Replaces every metavariable; throws MissingAssignment for unassigned ones.
  Typ apply(const Typ& t) const;
  bool weight(WeightId w) const;
  std::size_t satisfied(const std::vector<WeightId>& ws) const;
};

// In-memory evaluation, independent of any solver.
bool evaluate(const Constraint& c, const Model& m);

// Follows `path` through a closed type; nullopt if some step does not match the constructor.
std::optional<Typ> follow_path(const Typ& t, const std::vector<PathStep>& path);

std::vector<MetavarId> constraint_metavars(const Constraint& c);
std::vector<WeightId> constraint_weights(const Constraint& c);

std::string to_string(const Constraint& c);

}  // namespace migron
