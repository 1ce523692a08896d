#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mwb/formula.hpp"

namespace mwb {

// Syntax error with the byte offset of the offending token and the set of
// token descriptions that would have been accepted there.
class ParseError : public std::runtime_error {
public:
  ParseError(std::string message, std::size_t offset, std::vector<std::string> expected);
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

// Grammar, precedence low to high: <->, -> (right-assoc), |, & (left-assoc),
// ~, K. `<->` is sugar for the conjunction of both implications and is
// non-associative. Atoms are [a-z][a-zA-Z0-9_]*; `K` is reserved; `not`,
// `and`, `or` are rejected. `#` starts a comment to end of line.
Formula parse(std::string_view text);

}  // namespace mwb
