#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <vector>

#include "migron/expr.hpp"
#include "migron/types.hpp"

namespace migron {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, std::vector<std::string> expected, const std::string& found);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

class IllTyped : public Error {
 public:
  IllTyped(SourceLoc loc, const std::string& reason);
  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& name) : Error("unbound variable: " + name), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class UnresolvedMetavar : public Error {
 public:
  explicit UnresolvedMetavar(MetavarId id) : Error("unresolved metavariable ?" + std::to_string(id.value)) {}
};

class MissingAssignment : public Error {
 public:
  explicit MissingAssignment(MetavarId id)
      : Error("model has no assignment for ?" + std::to_string(id.value)), id_(id) {}
  MetavarId id() const { return id_; }

 private:
  MetavarId id_;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class SolverProtocolError : public SolverError {
 public:
  using SolverError::SolverError;
};

class SolverTimeout : public SolverError {
 public:
  explicit SolverTimeout(std::chrono::milliseconds limit)
      : SolverError("solver exceeded " + std::to_string(limit.count()) + " ms"), limit_(limit) {}
  std::chrono::milliseconds limit() const { return limit_; }

 private:
  std::chrono::milliseconds limit_;
};

// An invariant the theory guarantees did not hold (e.g. the weakened phase came back unsat).
class InternalError : public Error {
 public:
  using Error::Error;
};

class ManifestError : public Error {
 public:
  using Error::Error;
};

class WitnessRefuted : public Error {
 public:
  using Error::Error;
};

}  // namespace migron
