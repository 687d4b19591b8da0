#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "mucore/formula.hpp"

namespace mucore {

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line, int col)
      : std::runtime_error(what), line(line), col(col) {}
  int line;
  int col;
};

// Parses the text grammar: constants TRUE/FALSE, propositions, unary
// ! X F G, binary & | U W ->, quantifier prefixes "A x." and "E x.".
// Precedence: unary > U/W > & > | > ->; & and | associate left, U/W and
// -> associate right. "->" and G/F are desugared in the returned AST.
Formula parse(std::string_view text);

// Parses an occurrence path as printed by Occurrence::to_string, e.g.
// "l.r.o" or "root".
Occurrence parse_occurrence(std::string_view text);

}  // namespace mucore
