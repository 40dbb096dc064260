#pragma once

#include <map>
#include <optional>
#include <string>

#include "migron/expr.hpp"
#include "migron/types.hpp"

namespace migron {

using TypeEnv = std::map<std::string, Typ>;

// Surface typing: consistency at elimination forms, ⋆ heads are callable.
Typ typecheck_gtlc(const TypeEnv& env, const Expr& e);

// Result type of `+` on operands of the given types, if any.
std::optional<Typ> add_result(const Typ& left, const Typ& right);
// Type of a conditional whose branches have the given types, if they are consistent.
std::optional<Typ> branch_join(const Typ& then_type, const Typ& else_type);

}  // namespace migron
