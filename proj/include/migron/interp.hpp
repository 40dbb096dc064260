#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "migron/coercion.hpp"
#include "migron/expr.hpp"
#include "migron/runtime.hpp"

namespace migron {

inline constexpr std::size_t kDefaultStepLimit = 1'000'000;

// Run-local store. References are one-slot entries; vectors hold any number.
struct Store {
  struct Entry {
    bool is_vector = false;
    std::vector<Expr> slots;
  };
  std::vector<Entry> entries;
};

bool is_value(const Expr& e);

namespace outcome {
struct Val {
  Expr value;
  Store store;
};
struct StuckCoercion {
  Coercion failed;
  GroundTy expected;
  std::optional<GroundTy> found;
  std::string detail;
};
struct StuckOther {
  std::string reason;
};
struct Timeout {
  std::size_t steps;
};
}  // namespace outcome

struct Outcome {
  std::variant<outcome::Val, outcome::StuckCoercion, outcome::StuckOther, outcome::Timeout> result;
  std::size_t steps = 0;

  bool is_value() const { return std::holds_alternative<outcome::Val>(result); }
  bool is_stuck_coercion() const { return std::holds_alternative<outcome::StuckCoercion>(result); }
  bool is_stuck() const { return is_stuck_coercion() || std::holds_alternative<outcome::StuckOther>(result); }
  bool is_timeout() const { return std::holds_alternative<outcome::Timeout>(result); }
};

std::string describe(const Outcome& o);

// Small-step machine over closed terms with explicit coercions.
class Machine {
 public:
  enum class Status { Running, Done, Stuck };

  explicit Machine(Expr program);

  // Performs one reduction; Done once the term is a value.
  Status step();

  const Expr& term() const { return term_; }
  const Store& store() const { return store_; }
  std::size_t steps() const { return steps_; }
  // Set after step() returned Stuck.
  const Outcome& stuck_outcome() const { return stuck_; }

 private:
  Expr reduce(const Expr& e);
  Expr contract(const Expr& e);
  Expr apply_coercion(const Coercion& k, const Expr& v);

  Expr term_;
  Store store_;
  std::size_t steps_ = 0;
  Outcome stuck_;
};

Outcome eval(const Expr& e, std::size_t step_limit = kDefaultStepLimit);

// Capture-avoiding e[x := v].
Expr substitute(const Expr& e, const std::string& x, const Expr& v);

struct Observation {
  enum class Kind { Base, Fn, Struct, Opaque };
  Kind kind = Kind::Opaque;
  Constant constant;
  std::string shape;
  std::vector<Observation> children;

  friend bool operator==(const Observation&, const Observation&) = default;
};

Observation obs(const Expr& value, const Store& store);
std::string to_string(const Observation& o);

// Outcomes agree: values with equal observations, stuck with stuck, timeout with timeout.
bool outcomes_agree(const Outcome& a, const Outcome& b);

}  // namespace migron
