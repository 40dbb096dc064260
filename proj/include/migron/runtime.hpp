#pragma once

#include <map>
#include <optional>
#include <utility>

#include "migron/coercion.hpp"
#include "migron/expr.hpp"
#include "migron/typecheck.hpp"
#include "migron/types.hpp"

namespace migron {

// First matching equation wins; inconsistent pairs route through ⋆ and are doomed.
Coercion coerce(const Typ& source, const Typ& target);

struct CoercionType {
  Typ source;
  Typ target;
  friend bool operator==(const CoercionType&, const CoercionType&) = default;
};

// Synthesized S → T for a well-formed coercion.
std::optional<CoercionType> coercion_type(const Coercion& k);
bool typecheck_coercion(const Coercion& k, const Typ& source, const Typ& target);

// Elaborates a surface program with closed annotations into explicit coercions.
std::pair<Expr, Typ> insert_coercions(const TypeEnv& env, const Expr& e);

// Content (or element) types of store addresses, for typing runtime terms.
using StoreTyping = std::map<std::size_t, Typ>;

// Exact typing of the explicit-coercion language; no consistency anywhere.
Typ typecheck_coerced(const TypeEnv& env, const Expr& e, const StoreTyping* store = nullptr);

}  // namespace migron
