#include "migron/error.hpp"

namespace migron {

namespace {

std::string describe(int line, int column, const std::vector<std::string>& expected, const std::string& found) {
  std::string msg = std::to_string(line) + ":" + std::to_string(column) + ": expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) msg += i + 1 == expected.size() ? " or " : ", ";
    msg += expected[i];
  }
  return msg + ", found " + found;
}

}  // namespace

ParseError::ParseError(int line, int column, std::vector<std::string> expected, const std::string& found)
    : Error(describe(line, column, expected, found)), line_(line), column_(column), expected_(std::move(expected)) {}

IllTyped::IllTyped(SourceLoc loc, const std::string& reason)
    : Error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + reason), loc_(loc) {}

}  // namespace migron
