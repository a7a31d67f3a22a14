#pragma once

#include <string>
#include <vector>

#include "subkit/term.hpp"

namespace subkit {

struct ParseError : Error {
  ParseError(int line, int col, std::vector<std::string> expected, std::string found,
             const std::string& detail = {});
  int line, col;                     // 1-based
  std::vector<std::string> expected; // token descriptions, sorted
  std::string found;
};

Term parse_term(const std::string& text);
Inequality parse_inequality(const std::string& text);
Condition parse_condition(const std::string& text);

} // namespace subkit
