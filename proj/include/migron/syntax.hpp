#pragma once

#include <string>
#include <string_view>

#include "migron/expr.hpp"
#include "migron/types.hpp"

namespace migron {

struct SourceProgram {
  std::string text;
  std::string origin = "<stdin>";
};

SourceProgram read_source(const std::string& path);

Expr parse(const SourceProgram& src);
Expr parse(std::string_view text);
Typ parse_type(std::string_view text);

enum class PrintStyle { Surface, WithCoercions };

// Surface style drops resolved coercions and rejects metavariables.
std::string print(const Expr& e, PrintStyle style = PrintStyle::Surface);

}  // namespace migron
