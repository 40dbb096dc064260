#include "migron/solver.hpp"

#include <map>
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <thread>

#include "migron/error.hpp"
#include "migron/runtime.hpp"

extern char** environ;

namespace migron {

SolverOptions default_solver_options() {
  SolverOptions o;
  if (const char* env = std::getenv("MIGRON_SOLVER"); env && *env) o.executable = env;
  return o;
}

std::string metavar_symbol(MetavarId id) { return "a" + std::to_string(id.value); }
std::string weight_symbol(WeightId id) { return "w" + std::to_string(id.value); }

namespace {

void encode_into(std::ostringstream& out, const Typ& t) {
  switch (t.kind()) {
    case Typ::Kind::Unknown: out << "star"; return;
    case Typ::Kind::Base: out << to_string(t.base_type()); return;
    case Typ::Kind::Metavar: out << metavar_symbol(t.metavar_id()); return;
    case Typ::Kind::Arrow: out << "(arr "; break;
    case Typ::Kind::Ref: out << "(ref "; break;
    case Typ::Kind::Pair: out << "(pair "; break;
    case Typ::Kind::Vector: out << "(vec "; break;
  }
  auto kids = t.children();
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i) out << ' ';
    encode_into(out, kids[i]);
  }
  out << ')';
}

struct Selector {
  const char* constructor;
  const char* field;
};

Selector selector(PathStep s) {
  switch (s) {
    case PathStep::ArrowIn: return {"arr", "in"};
    case PathStep::ArrowOut: return {"arr", "out"};
    case PathStep::RefContent: return {"ref", "to"};
    case PathStep::PairLeft: return {"pair", "left"};
    case PathStep::PairRight: return {"pair", "right"};
    case PathStep::VectorElem: return {"vec", "elem"};
  }
  return {"", ""};
}

void encode_into(std::ostringstream& out, const Constraint& c) {
  using K = Constraint::Kind;
  switch (c.kind()) {
    case K::True: out << "true"; return;
    case K::TypEq:
      out << "(= ";
      encode_into(out, c.lhs());
      out << ' ';
      encode_into(out, c.rhs());
      out << ')';
      return;
    case K::Weight: out << weight_symbol(c.weight_id()); return;
    case K::And:
    case K::Or: {
      const auto& ops = c.operands();
      if (ops.empty()) {
        out << (c.kind() == K::And ? "true" : "false");
        return;
      }
      if (ops.size() == 1) {
        encode_into(out, ops[0]);
        return;
      }
      out << (c.kind() == K::And ? "(and" : "(or");
      for (const auto& k : ops) {
        out << ' ';
        encode_into(out, k);
      }
      out << ')';
      return;
    }
    case K::Not:
      out << "(not ";
      encode_into(out, c.operands().front());
      out << ')';
      return;
    case K::IsGround: {
      std::ostringstream subject;
      encode_into(subject, c.subject());
      out << "(or";
      for (GroundTy g : all_grounds()) {
        out << " (= " << subject.str() << ' ';
        encode_into(out, ground_type(g));
        out << ')';
      }
      out << ')';
      return;
    }
    case K::PathUnknown: {
      std::ostringstream term;
      encode_into(term, c.subject());
      std::string cur = term.str();
      std::vector<std::string> guards;
      for (PathStep s : c.path()) {
        Selector sel = selector(s);
        guards.push_back(std::string("((_ is ") + sel.constructor + ") " + cur + ")");
        cur = std::string("(") + sel.field + " " + cur + ")";
      }
      std::string goal = "(= " + cur + " star)";
      if (guards.empty()) {
        out << goal;
      } else {
        out << "(=> " << (guards.size() == 1 ? guards[0] : "(and");
        if (guards.size() > 1) {
          for (const auto& g : guards) out << ' ' << g;
          out << ')';
        }
        out << ' ' << goal << ')';
      }
      return;
    }
  }
}

}  // namespace

std::string encode(const Typ& t) {
  std::ostringstream out;
  encode_into(out, t);
  return out.str();
}

std::string encode(const Constraint& c) {
  std::ostringstream out;
  encode_into(out, c);
  return out.str();
}

SolverSession::SolverSession(SolverOptions options) : options_(std::move(options)) {
  int sv[2];
  if (socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0)
    throw SolverError(std::string("socketpair: ") + std::strerror(errno));
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, sv[1], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, sv[1], STDOUT_FILENO);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);
  std::vector<std::string> args = {options_.executable};
  args.insert(args.end(), options_.arguments.begin(), options_.arguments.end());
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  pid_t pid = -1;
  int rc = posix_spawnp(&pid, options_.executable.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  close(sv[1]);
  if (rc != 0) {
    close(sv[0]);
    throw SolverError("cannot start solver '" + options_.executable + "': " + std::strerror(rc));
  }
  pid_ = pid;
  to_solver_ = from_solver_ = sv[0];
  try {
    expect_success("(set-option :print-success true)");
    expect_success("(set-option :produce-models true)");
    expect_success("(set-option :random-seed " + std::to_string(options_.random_seed) + ")");
    expect_success("(set-option :timeout " + std::to_string(options_.timeout.count()) + ")");
  } catch (...) {
    terminate();
    throw;
  }
}

SolverSession::~SolverSession() { terminate(); }

void SolverSession::terminate() {
  if (pid_ < 0) return;
  const char bye[] = "(exit)\n";
  (void)!send(to_solver_, bye, sizeof bye - 1, MSG_NOSIGNAL);
  shutdown(to_solver_, SHUT_WR);
  int status = 0;
  bool reaped = false;
  for (int i = 0; i < 50 && !reaped; ++i) {
    if (waitpid(pid_, &status, WNOHANG) == pid_) {
      reaped = true;
    } else {
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
  }
  if (!reaped) {
    kill(pid_, SIGKILL);
    waitpid(pid_, &status, 0);
  }
  close(to_solver_);
  pid_ = -1;
  if (options_.on_transcript) options_.on_transcript(script_);
  to_solver_ = from_solver_ = -1;
}

SExpr SolverSession::read_reply(std::chrono::milliseconds budget) {
  auto deadline = std::chrono::steady_clock::now() + budget;
  while (true) {
    if (auto parsed = parse_sexpr_prefix(buffer_)) {
      buffer_.erase(0, parsed->second);
      return std::move(parsed->first);
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      terminate();
      throw SolverTimeout(budget);
    }
    pollfd p{from_solver_, POLLIN, 0};
    int ready = poll(&p, 1, static_cast<int>(left.count()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready < 0) throw SolverError(std::string("poll: ") + std::strerror(errno));
    if (ready == 0) continue;
    char chunk[8192];
    ssize_t n = read(from_solver_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw SolverProtocolError("solver closed its output" + (buffer_.empty() ? "" : ": " + buffer_));
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

SExpr SolverSession::command(const std::string& text, std::chrono::milliseconds budget) {
  if (pid_ < 0) throw SolverError("solver session is closed");
  std::string line = text + "\n";
  script_ += line;
  std::size_t sent = 0;
  while (sent < line.size()) {
    ssize_t n = send(to_solver_, line.data() + sent, line.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw SolverProtocolError("cannot write to solver: " + std::string(std::strerror(errno)));
    sent += static_cast<std::size_t>(n);
  }
  SExpr reply = read_reply(budget);
  if (reply.is_list && !reply.items.empty() && reply.items[0].is_atom("error"))
    throw SolverProtocolError("solver rejected `" + text.substr(0, 80) + "`: " + reply.str());
  return reply;
}

void SolverSession::expect_success(const std::string& text) {
  SExpr reply = command(text);
  if (!reply.is_atom("success")) throw SolverProtocolError("unexpected reply to `" + text + "`: " + reply.str());
}

void SolverSession::declare_typ_datatype() {
  expect_success(
      "(declare-datatypes () ((Typ (star) (int) (bool) (str) (unit) (arr (in Typ) (out Typ)) (ref (to Typ)) "
      "(pair (left Typ) (right Typ)) (vec (elem Typ)))))");
}

void SolverSession::declare_metavar(MetavarId id) {
  expect_success("(declare-const " + metavar_symbol(id) + " Typ)");
  declared_.insert(metavar_symbol(id));
}

void SolverSession::declare_weight(WeightId id) {
  expect_success("(declare-const " + weight_symbol(id) + " Bool)");
  declared_.insert(weight_symbol(id));
}

void SolverSession::assert_constraint(const Constraint& c) { expect_success("(assert " + encode(c) + ")"); }

void SolverSession::assert_soft(const SoftAssertion& soft) {
  expect_success("(assert-soft " + weight_symbol(soft.weight) + " :weight " + std::to_string(soft.penalty) + ")");
}

SolverSession::Status SolverSession::check_sat() {
  SExpr reply = command("(check-sat)", options_.timeout + std::chrono::milliseconds(2000));
  if (reply.is_atom("sat")) return Status::Sat;
  if (reply.is_atom("unsat")) return Status::Unsat;
  if (reply.is_atom("unknown")) throw SolverTimeout(options_.timeout);
  throw SolverProtocolError("unexpected check-sat reply: " + reply.str());
}

namespace {

using LetScope = std::vector<std::map<std::string, Typ>>;

Typ decode_typ(const SExpr& term, LetScope& scope) {
  if (!term.is_list) {
    for (auto frame = scope.rbegin(); frame != scope.rend(); ++frame)
      if (auto hit = frame->find(term.atom); hit != frame->end()) return hit->second;
    if (term.atom == "star") return Typ::unknown();
    if (term.atom == "int") return Typ::integer();
    if (term.atom == "bool") return Typ::boolean();
    if (term.atom == "str") return Typ::string();
    if (term.atom == "unit") return Typ::unit();
    throw SolverProtocolError("unexpected Typ value: " + term.atom);
  }
  const auto& it = term.items;
  auto sub = [&](const SExpr& t) { return decode_typ(t, scope); };
  if (it.size() == 3 && it[0].is_atom("let") && it[1].is_list) {
    std::map<std::string, Typ> frame;
    for (const auto& b : it[1].items) {
      if (!b.is_list || b.items.size() != 2 || b.items[0].is_list)
        throw SolverProtocolError("malformed let binding: " + b.str());
      frame.insert_or_assign(b.items[0].atom, sub(b.items[1]));
    }
    scope.push_back(std::move(frame));
    Typ body = sub(it[2]);
    scope.pop_back();
    return body;
  }
  if (it.size() == 3 && it[0].is_atom("arr")) return Typ::arrow(sub(it[1]), sub(it[2]));
  if (it.size() == 3 && it[0].is_atom("pair")) return Typ::pair(sub(it[1]), sub(it[2]));
  if (it.size() == 2 && it[0].is_atom("ref")) return Typ::ref(sub(it[1]));
  if (it.size() == 2 && it[0].is_atom("vec")) return Typ::vector(sub(it[1]));
  throw SolverProtocolError("unexpected Typ value: " + term.str());
}

}  // namespace

Typ decode_typ(const SExpr& term) {
  LetScope scope;
  return decode_typ(term, scope);
}

Model SolverSession::get_model(const std::vector<MetavarId>& metavars, const std::vector<WeightId>& weights) {
  SExpr reply = command("(get-model)");
  if (!reply.is_list) throw SolverProtocolError("unexpected get-model reply: " + reply.str());
  std::map<std::string, const SExpr*> defs;
  for (const auto& d : reply.items) {
    if (d.is_list && d.items.size() == 5 && d.items[0].is_atom("define-fun") && !d.items[1].is_list)
      defs[d.items[1].atom] = &d.items[4];
  }
  Model m;
  for (MetavarId id : metavars) {
    auto it = defs.find(metavar_symbol(id));
    m.types[id] = it == defs.end() ? Typ::unknown() : decode_typ(*it->second);
  }
  for (WeightId id : weights) {
    auto it = defs.find(weight_symbol(id));
    if (it != defs.end() && !it->second->is_atom("true") && !it->second->is_atom("false"))
      throw SolverProtocolError("unexpected Bool value: " + it->second->str());
    m.weights[id] = it != defs.end() && it->second->is_atom("true");
  }
  return m;
}

void declare_problem(SolverSession& session, const std::vector<MetavarId>& metavars,
                     const std::vector<WeightId>& weights) {
  session.declare_typ_datatype();
  for (MetavarId id : metavars) session.declare_metavar(id);
  for (WeightId id : weights) session.declare_weight(id);
}

std::optional<Model> solve(SolverSession& session, const Constraint& constraint,
                           const std::vector<SoftAssertion>& softs, const std::vector<MetavarId>& metavars) {
  session.assert_constraint(constraint);
  for (const auto& s : softs) session.assert_soft(s);
  if (session.check_sat() == SolverSession::Status::Unsat) return std::nullopt;
  std::vector<WeightId> weights;
  for (const auto& s : softs) weights.push_back(s.weight);
  return session.get_model(metavars, weights);
}

namespace {

// Triangular substitution with an occurs check.
class Unifier {
 public:
  Typ resolve(const Typ& t) const {
    Typ cur = t;
    while (cur.is_metavar()) {
      auto it = bound_.find(cur.metavar_id());
      if (it == bound_.end()) break;
      cur = it->second;
    }
    return cur;
  }

  Typ expand(const Typ& t) const {
    Typ head = resolve(t);
    auto kids = head.children();
    if (kids.empty()) return head;
    for (auto& k : kids) k = expand(k);
    return head.with_children(kids);
  }

  bool unify(const Typ& a, const Typ& b) {
    Typ x = resolve(a), y = resolve(b);
    if (x.is_metavar() && y.is_metavar() && x.metavar_id() == y.metavar_id()) return true;
    if (x.is_metavar()) return bind(x.metavar_id(), y);
    if (y.is_metavar()) return bind(y.metavar_id(), x);
    if (x.kind() != y.kind()) return false;
    if (x.is_base()) return x.base_type() == y.base_type();
    auto xs = x.children(), ys = y.children();
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (!unify(xs[i], ys[i])) return false;
    return true;
  }

  // Closes t, sending unbound metavariables to ⋆.
  Typ close(const Typ& t) const {
    Typ head = resolve(t);
    if (head.is_metavar()) return Typ::unknown();
    auto kids = head.children();
    if (kids.empty()) return head;
    for (auto& k : kids) k = close(k);
    return head.with_children(kids);
  }

 private:
  bool occurs(MetavarId id, const Typ& t) const {
    Typ head = resolve(t);
    if (head.is_metavar()) return head.metavar_id() == id;
    for (const auto& k : head.children())
      if (occurs(id, k)) return true;
    return false;
  }

  bool bind(MetavarId id, const Typ& t) {
    if (occurs(id, t)) return false;
    bound_[id] = t;
    return true;
  }

  std::map<MetavarId, Typ> bound_;
};

struct Obligations {
  std::vector<std::pair<Typ, Typ>> equations;
  std::vector<Constraint> paths;
};

// Equations of the disjuncts the raw model makes true.
void collect(const Constraint& c, const Model& raw, Obligations& out) {
  using K = Constraint::Kind;
  switch (c.kind()) {
    case K::TypEq: out.equations.emplace_back(c.lhs(), c.rhs()); return;
    case K::IsGround: {
      auto g = ground_of(raw.apply(c.subject()));
      if (g) out.equations.emplace_back(c.subject(), ground_type(*g));
      return;
    }
    case K::PathUnknown: out.paths.push_back(c); return;
    case K::And:
      for (const auto& k : c.operands()) collect(k, raw, out);
      return;
    case K::Or:
      for (const auto& k : c.operands()) {
        if (evaluate(k, raw)) {
          collect(k, raw, out);
          return;
        }
      }
      return;
    case K::True:
    case K::Weight:
    case K::Not: return;
  }
}

// Step through `t` along `path`; nullopt when a free variable or another constructor guards it off.
std::optional<Typ> reach(const Unifier& u, const Typ& t, const std::vector<PathStep>& path) {
  Typ cur = u.resolve(t);
  for (PathStep s : path) {
    Typ::Kind want = Typ::Kind::Arrow;
    if (s == PathStep::RefContent) want = Typ::Kind::Ref;
    if (s == PathStep::PairLeft || s == PathStep::PairRight) want = Typ::Kind::Pair;
    if (s == PathStep::VectorElem) want = Typ::Kind::Vector;
    if (cur.kind() != want) return std::nullopt;
    auto kids = cur.children();
    bool second = s == PathStep::ArrowOut || s == PathStep::PairRight;
    cur = u.resolve(kids[second ? 1 : 0]);
  }
  return cur;
}

}  // namespace

Model normalize_model(const Constraint& constraint, const Model& raw, const std::vector<MetavarId>& metavars) {
  Obligations ob;
  collect(constraint, raw, ob);
  Unifier u;
  for (const auto& [a, b] : ob.equations)
    if (!u.unify(a, b)) return raw;
  std::vector<bool> done(ob.paths.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < ob.paths.size(); ++i) {
      if (done[i]) continue;
      auto end = reach(u, ob.paths[i].subject(), ob.paths[i].path());
      if (!end) continue;
      if (!u.unify(*end, Typ::unknown())) return raw;
      done[i] = changed = true;
    }
  }
  Model out;
  out.weights = raw.weights;
  for (MetavarId id : metavars) out.types[id] = u.close(Typ::metavar(id));
  for (MetavarId id : constraint_metavars(constraint))
    if (!out.types.count(id)) out.types[id] = u.close(Typ::metavar(id));
  try {
    if (evaluate(constraint, out)) return out;
  } catch (const MissingAssignment&) {
  }
  return raw;
}

Typ subst(const Model& model, const Typ& t) { return model.apply(t); }

Expr subst(const Model& model, const Expr& e) {
  return map_expr(e, [&](const Expr& n) -> Expr {
    switch (n.kind()) {
      case ExprKind::Fun:
      case ExprKind::Fix: return n.with_annotation(model.apply(n.annotation()));
      case ExprKind::CoerceApp: {
        const auto* pending = std::get_if<SuspendedCoercion>(&n.coercion_slot());
        if (!pending) return n;
        Typ from = model.apply(pending->source), to = model.apply(pending->target);
        if (from == to) return n.operand(0);
        return n.with_coercion(coerce(from, to));
      }
      default: return n;
    }
  });
}

}  // namespace migron
