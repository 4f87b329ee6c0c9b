#pragma once

#include <variant>

#include "vg/structures.hpp"

namespace vg {

struct ParseError : std::runtime_error {
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line, col;
};

// Expression grammar: integers, identifiers, + - * / ^, parentheses, calls of
// exp/ln/sqrt/erf/sin/cos; precedence ^ > unary- > * / > + -, ^ right-assoc.
Ex parse_expr(std::string_view text, const VariableSpace& space);

using ParsedStructure = std::variant<PathStructure, HomogeneousStructure, ChristoffelTable,
                                     Lagrangian, SecondOrderLagrangian>;

// Structure-file format: a [header] block with `kind` and `n`, followed by
// `name = expression` assignments; `#` starts a comment.
ParsedStructure parse_structure(std::string_view contents);
ParsedStructure parse_structure_file(const std::string& path);

std::string print_structure(const ParsedStructure& s);

}  // namespace vg
