#include "migron/syntax.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "migron/error.hpp"

namespace migron {

SourceProgram read_source(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return {buf.str(), path};
}

namespace {

enum class Tok { Ident, Int, Str, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t number = 0;
  SourceLoc loc;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {"fun",  "let",    "in",     "if",     "then",   "else", "fix",
                                          "ref",  "fst",    "snd",    "vec",    "vecget", "vecset", "veclen",
                                          "true", "false",  "int",    "bool",   "str",    "unit",   "any"};
  return k;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.loc = {line, col};
    bool negative_number = c == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1]));
    if (std::isdigit(static_cast<unsigned char>(c)) || negative_number) {
      std::size_t j = i + 1;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (ec != std::errc{}) throw ParseError(line, col, {"integer in range"}, t.text);
      advance(j - i);
    } else if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      advance(1);
      t.kind = Tok::Str;
      while (true) {
        if (i >= src.size()) throw ParseError(line, col, {"closing quote"}, "end of input");
        char d = src[i];
        if (d == '"') {
          advance(1);
          break;
        }
        if (d == '\\') {
          if (i + 1 >= src.size()) throw ParseError(line, col, {"escape sequence"}, "end of input");
          char e = src[i + 1];
          switch (e) {
            case 'n': t.text += '\n'; break;
            case 't': t.text += '\t'; break;
            case '"': t.text += '"'; break;
            case '\\': t.text += '\\'; break;
            default: throw ParseError(line, col, {"escape sequence"}, std::string(1, e));
          }
          advance(2);
        } else {
          t.text += d;
          advance(1);
        }
      }
    } else {
      static const char* two[] = {":=", "->"};
      t.kind = Tok::Sym;
      for (const char* s : two)
        if (src.substr(i, 2) == s) t.text = s;
      if (t.text.empty()) {
        if (std::string_view("(),.:;+*![]=").find(c) == std::string_view::npos)
          throw ParseError(line, col, {"token"}, std::string(1, c));
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.loc = {line, col};
  out.push_back(end);
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Str: return "string literal";
    default: return "'" + t.text + "'";
  }
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Expr program() {
    Expr e = expr();
    expect_end();
    return e;
  }

  Typ whole_type() {
    Typ t = type();
    expect_end();
    return t;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }

  bool is_sym(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool is_kw(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw ParseError(peek().loc.line, peek().loc.column, std::move(expected), describe(peek()));
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail({"end of input"});
  }

  void expect_sym(const char* s) {
    if (!is_sym(s)) fail({std::string("'") + s + "'"});
    ++pos_;
  }

  void expect_kw(const char* s) {
    if (!is_kw(s)) fail({std::string("'") + s + "'"});
    ++pos_;
  }

  std::string identifier() {
    if (peek().kind != Tok::Ident || keywords().count(peek().text)) fail({"identifier"});
    return take().text;
  }

  Typ type() {
    Typ t = type_atom();
    if (is_sym("->")) {
      ++pos_;
      return Typ::arrow(t, type());
    }
    return t;
  }

  Typ type_atom() {
    if (peek().kind == Tok::Ident) {
      const std::string& w = peek().text;
      if (w == "int") return ++pos_, Typ::integer();
      if (w == "bool") return ++pos_, Typ::boolean();
      if (w == "str") return ++pos_, Typ::string();
      if (w == "unit") return ++pos_, Typ::unit();
      if (w == "any") return ++pos_, Typ::unknown();
      if (w == "ref") return ++pos_, Typ::ref(type_atom());
      if (w == "vec") return ++pos_, Typ::vector(type_atom());
    }
    if (is_sym("(")) {
      ++pos_;
      Typ t = type();
      if (is_sym(",")) {
        ++pos_;
        Typ r = type();
        expect_sym(")");
        return Typ::pair(t, r);
      }
      expect_sym(")");
      return t;
    }
    fail({"type"});
  }

  Expr expr() {
    SourceLoc loc = peek().loc;
    Expr e = open();
    if (is_sym(";")) {
      ++pos_;
      return Expr::seq(e, expr(), loc);
    }
    return e;
  }

  Expr open() {
    SourceLoc loc = peek().loc;
    if (is_kw("fun")) {
      ++pos_;
      std::string x;
      Typ t;
      if (is_sym("(")) {
        ++pos_;
        x = identifier();
        if (is_sym(":")) {
          ++pos_;
          t = type();
        }
        expect_sym(")");
      } else {
        x = identifier();
        if (is_sym(":")) {
          ++pos_;
          t = type();
        }
      }
      expect_sym(".");
      return Expr::fun(x, t, expr(), loc);
    }
    if (is_kw("fix")) {
      ++pos_;
      std::string f = identifier();
      Typ t;
      if (is_sym(":")) {
        ++pos_;
        t = type();
      }
      expect_sym(".");
      return Expr::fix(f, t, expr(), loc);
    }
    if (is_kw("let")) {
      ++pos_;
      std::string x = identifier();
      expect_sym("=");
      Expr bound = expr();
      expect_kw("in");
      return Expr::let(x, bound, expr(), loc);
    }
    if (is_kw("if")) {
      ++pos_;
      Expr c = expr();
      expect_kw("then");
      Expr a = expr();
      expect_kw("else");
      return Expr::if_(c, a, expr(), loc);
    }
    return assign();
  }

  Expr assign() {
    SourceLoc loc = peek().loc;
    Expr lhs = sum();
    if (is_sym(":=")) {
      ++pos_;
      return Expr::set_ref(lhs, assign(), loc);
    }
    return lhs;
  }

  Expr sum() {
    SourceLoc loc = peek().loc;
    Expr e = product();
    while (is_sym("+")) {
      ++pos_;
      e = Expr::add(e, product(), loc);
    }
    return e;
  }

  Expr product() {
    SourceLoc loc = peek().loc;
    Expr e = application();
    while (is_sym("*")) {
      ++pos_;
      e = Expr::mul(e, application(), loc);
    }
    return e;
  }

  bool starts_unary() const {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int:
      case Tok::Str: return true;
      case Tok::Sym: return t.text == "(" || t.text == "!";
      case Tok::Ident: {
        static const std::set<std::string> stop = {"fun", "let", "in",  "if",  "then", "else", "fix",
                                                   "int", "bool", "str", "unit", "any"};
        return !stop.count(t.text);
      }
      default: return false;
    }
  }

  Expr application() {
    SourceLoc loc = peek().loc;
    Expr e = unary();
    while (starts_unary()) e = Expr::app(e, unary(), loc);
    return e;
  }

  Expr unary() {
    SourceLoc loc = peek().loc;
    if (is_sym("!")) return ++pos_, Expr::deref(unary(), loc);
    if (is_kw("ref")) return ++pos_, Expr::ref_new(unary(), loc);
    if (is_kw("fst")) return ++pos_, Expr::first(unary(), loc);
    if (is_kw("snd")) return ++pos_, Expr::second(unary(), loc);
    return atom();
  }

  std::vector<Expr> call_args(std::size_t n) {
    expect_sym("(");
    std::vector<Expr> args;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) expect_sym(",");
      args.push_back(expr());
    }
    expect_sym(")");
    return args;
  }

  Expr atom() {
    const Token& t = peek();
    SourceLoc loc = t.loc;
    switch (t.kind) {
      case Tok::Int: return Expr::lit(take().number, loc);
      case Tok::Str: return Expr::lit(take().text, loc);
      case Tok::Ident: {
        if (t.text == "true") return ++pos_, Expr::lit(true, loc);
        if (t.text == "false") return ++pos_, Expr::lit(false, loc);
        if (t.text == "vec") {
          ++pos_;
          auto a = call_args(2);
          return Expr::vec_new(a[0], a[1], loc);
        }
        if (t.text == "vecget") {
          ++pos_;
          auto a = call_args(2);
          return Expr::vec_get(a[0], a[1], loc);
        }
        if (t.text == "vecset") {
          ++pos_;
          auto a = call_args(3);
          return Expr::vec_set(a[0], a[1], a[2], loc);
        }
        if (t.text == "veclen") {
          ++pos_;
          auto a = call_args(1);
          return Expr::vec_len(a[0], loc);
        }
        return Expr::var(identifier(), loc);
      }
      case Tok::Sym:
        if (t.text == "(") {
          ++pos_;
          if (is_sym(")")) return ++pos_, Expr::lit(UnitValue{}, loc);
          Expr e = expr();
          if (is_sym(",")) {
            ++pos_;
            Expr r = expr();
            expect_sym(")");
            return Expr::pair(e, r, loc);
          }
          expect_sym(")");
          return e;
        }
        break;
      default: break;
    }
    fail({"expression"});
  }
};

// Printing precedence, loosest first.
enum Level { Sequence, Open, Assign, Sum, Product, Application, Prefix, Atom };

class Printer {
 public:
  explicit Printer(PrintStyle style) : style_(style) {}

  std::string expr(const Expr& e, Level ctx) {
    Level self = level(e);
    std::string s = body(e);
    return self < ctx ? "(" + s + ")" : s;
  }

  std::string type(const Typ& t) {
    if (style_ == PrintStyle::Surface && !t.is_closed()) {
      std::vector<MetavarId> ids;
      collect_metavars(t, ids);
      throw UnresolvedMetavar(ids.front());
    }
    return to_string(t);
  }

 private:
  PrintStyle style_;

  Level level(const Expr& e) const {
    switch (e.kind()) {
      case ExprKind::Seq: return Sequence;
      case ExprKind::Fun:
      case ExprKind::Fix:
      case ExprKind::Let:
      case ExprKind::If: return Open;
      case ExprKind::SetRef: return Assign;
      case ExprKind::Add: return Sum;
      case ExprKind::Mul: return Product;
      case ExprKind::App: return Application;
      case ExprKind::Deref:
      case ExprKind::RefNew:
      case ExprKind::First:
      case ExprKind::Second: return Prefix;
      case ExprKind::CoerceApp: return style_ == PrintStyle::Surface ? level(e.operand(0)) : Prefix;
      default: return Atom;
    }
  }

  std::string coercion(const CoercionSlot& k) {
    if (const auto* s = std::get_if<SuspendedCoercion>(&k))
      return "coerce(" + to_string(s->source) + ", " + to_string(s->target) + ")";
    return to_string(std::get<Coercion>(k));
  }

  std::string body(const Expr& e) {
    const auto& o = e.operands();
    switch (e.kind()) {
      case ExprKind::Var: return e.name();
      case ExprKind::Lit: return to_string(e.constant());
      case ExprKind::Fun: return "fun (" + e.name() + ":" + type(e.annotation()) + "). " + expr(o[0], Sequence);
      case ExprKind::Fix: return "fix " + e.name() + ":" + type(e.annotation()) + ". " + expr(o[0], Sequence);
      case ExprKind::Let:
        return "let " + e.name() + " = " + expr(o[0], Sequence) + " in " + expr(o[1], Sequence);
      case ExprKind::If:
        return "if " + expr(o[0], Sequence) + " then " + expr(o[1], Sequence) + " else " + expr(o[2], Sequence);
      case ExprKind::Seq: return expr(o[0], Assign) + "; " + expr(o[1], Sequence);
      case ExprKind::SetRef: return expr(o[0], Sum) + " := " + expr(o[1], Assign);
      case ExprKind::Add: return expr(o[0], Sum) + " + " + expr(o[1], Product);
      case ExprKind::Mul: return expr(o[0], Product) + " * " + expr(o[1], Application);
      case ExprKind::App: return expr(o[0], Application) + " " + expr(o[1], Prefix);
      case ExprKind::Deref: return "!" + expr(o[0], Prefix);
      case ExprKind::RefNew: return "ref " + expr(o[0], Prefix);
      case ExprKind::First: return "fst " + expr(o[0], Prefix);
      case ExprKind::Second: return "snd " + expr(o[0], Prefix);
      case ExprKind::PairNew: return "(" + expr(o[0], Sequence) + ", " + expr(o[1], Sequence) + ")";
      case ExprKind::VecNew: return "vec(" + expr(o[0], Sequence) + ", " + expr(o[1], Sequence) + ")";
      case ExprKind::VecGet: return "vecget(" + expr(o[0], Sequence) + ", " + expr(o[1], Sequence) + ")";
      case ExprKind::VecSet:
        return "vecset(" + expr(o[0], Sequence) + ", " + expr(o[1], Sequence) + ", " + expr(o[2], Sequence) + ")";
      case ExprKind::VecLen: return "veclen(" + expr(o[0], Sequence) + ")";
      case ExprKind::CoerceApp:
        if (style_ == PrintStyle::Surface) {
          if (std::holds_alternative<SuspendedCoercion>(e.coercion_slot()))
            throw Error("suspended coercion cannot be printed as surface syntax");
          return body(o[0]);
        }
        return "[" + coercion(e.coercion_slot()) + "] " + expr(o[0], Prefix);
      case ExprKind::Box: return "box(" + to_string(e.ground()) + ", " + expr(o[0], Sequence) + ")";
      case ExprKind::Cell: return "<cell " + std::to_string(e.address()) + ">";
      case ExprKind::VecCell: return "<vector " + std::to_string(e.address()) + ">";
      case ExprKind::Proxy: return "<proxy " + to_string(e.coercion()) + " " + expr(o[0], Prefix) + ">";
    }
    return "?";
  }
};

}  // namespace

Expr parse(const SourceProgram& src) { return Parser(src.text).program(); }

Expr parse(std::string_view text) { return Parser(text).program(); }

Typ parse_type(std::string_view text) { return Parser(text).whole_type(); }

std::string print(const Expr& e, PrintStyle style) { return Printer(style).expr(e, Sequence); }

}  // namespace migron
