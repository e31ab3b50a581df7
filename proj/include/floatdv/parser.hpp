#pragma once

#include <string>
#include <string_view>

#include "floatdv/ast.hpp"

namespace floatdv::minif {

/// Parses MiniF source. Throws ParseError with line/column diagnostics on
/// syntax errors, duplicate declarations, or an unterminated annotation.
Program parse_program(std::string_view source);

/// Reads and parses a `.minif` file.
Program parse_file(const std::string& path);

/// Canonical concrete syntax; parse(print(p)) prints identically.
std::string print_program(const Program& p);
std::string print_expr(const Expr& e);
std::string print_type(const Type& t);

}  // namespace floatdv::minif
