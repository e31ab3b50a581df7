#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace floatdv {

class SexprError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimal S-expression value for reading solver output.
/// Atoms keep their spelling, except that |quoted| symbols lose the bars
/// and "strings" lose the quotes (flagged by `quoted`).
struct Sexpr {
  bool is_list = false;
  bool quoted = false;
  std::string atom;
  std::vector<Sexpr> items;

  bool is_atom(std::string_view s) const { return !is_list && !quoted && atom == s; }
  std::string str() const;
};

/// Parses every top-level expression in `text`. `;` comments are skipped.
std::vector<Sexpr> parse_sexprs(std::string_view text);

}  // namespace floatdv
