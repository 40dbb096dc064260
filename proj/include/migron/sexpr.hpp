#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace migron {

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;

  static SExpr make_atom(std::string a) { return {false, std::move(a), {}}; }
  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
  std::string str() const;
};

// Parses one S-expression at the start of `text` (after whitespace and comments).
// Returns the expression and the number of characters consumed, or nullopt if the
// input ends before the expression is complete.
std::optional<std::pair<SExpr, std::size_t>> parse_sexpr_prefix(std::string_view text);

// Whole-string parse; throws SolverProtocolError if malformed or incomplete.
SExpr parse_sexpr(std::string_view text);

}  // namespace migron
