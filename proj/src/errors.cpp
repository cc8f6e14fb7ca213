#include "randlab/errors.hpp"

namespace randlab {

namespace {
std::string with_position(const std::string& what, std::size_t line, std::size_t column) {
  if (line == 0) return what;
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
}
}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : Error(with_position(what, line, column)), line_(line), column_(column) {}

}  // namespace randlab
