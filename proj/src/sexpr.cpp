#include "migron/sexpr.hpp"

#include <cctype>

#include "migron/error.hpp"

namespace migron {

std::string SExpr::str() const {
  if (!is_list) return atom;
  std::string s = "(";
  for (std::size_t i = 0; i < items.size(); ++i) s += (i ? " " : "") + items[i].str();
  return s + ")";
}

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  bool at_end() const { return pos >= text.size(); }

  void skip_blank() {
    while (!at_end()) {
      char c = text[pos];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else if (c == ';') {
        while (!at_end() && text[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  }
};

struct Incomplete {};

SExpr read(Cursor& c) {
  c.skip_blank();
  if (c.at_end()) throw Incomplete{};
  char ch = c.text[c.pos];
  if (ch == '(') {
    ++c.pos;
    SExpr list;
    list.is_list = true;
    while (true) {
      c.skip_blank();
      if (c.at_end()) throw Incomplete{};
      if (c.text[c.pos] == ')') {
        ++c.pos;
        return list;
      }
      list.items.push_back(read(c));
    }
  }
  if (ch == ')') throw SolverProtocolError("unexpected ')' in solver output");
  std::string atom;
  if (ch == '"') {
    atom += ch;
    ++c.pos;
    while (true) {
      if (c.at_end()) throw Incomplete{};
      char d = c.text[c.pos++];
      atom += d;
      if (d == '"') {
        if (!c.at_end() && c.text[c.pos] == '"') {
          atom += '"';
          ++c.pos;
          continue;
        }
        return SExpr::make_atom(atom);
      }
    }
  }
  if (ch == '|') {
    ++c.pos;
    while (true) {
      if (c.at_end()) throw Incomplete{};
      char d = c.text[c.pos++];
      if (d == '|') return SExpr::make_atom(atom);
      atom += d;
    }
  }
  while (!c.at_end()) {
    char d = c.text[c.pos];
    if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';') return SExpr::make_atom(atom);
    atom += d;
    ++c.pos;
  }
  // An atom running into the end of the buffer may continue in the next chunk.
  throw Incomplete{};
}

}  // namespace

std::optional<std::pair<SExpr, std::size_t>> parse_sexpr_prefix(std::string_view text) {
  Cursor c{text};
  try {
    SExpr e = read(c);
    return std::make_pair(std::move(e), c.pos);
  } catch (const Incomplete&) {
    return std::nullopt;
  }
}

SExpr parse_sexpr(std::string_view text) {
  std::string padded(text);
  padded += '\n';
  auto r = parse_sexpr_prefix(padded);
  if (!r) throw SolverProtocolError("incomplete S-expression: " + std::string(text));
  Cursor rest{padded, r->second};
  rest.skip_blank();
  if (!rest.at_end()) throw SolverProtocolError("trailing input after S-expression: " + std::string(text));
  return r->first;
}

}  // namespace migron
