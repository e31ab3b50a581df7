#pragma once

#include <cstdint>
#include <optional>

#include "floatdv/ast.hpp"

namespace floatdv::minif {

/// Annotates every expression with its type and checks the program.
/// Collects all diagnostics and throws TypeError if there are any.
/// Running it again on the result is a no-op.
TypedProgram typecheck(Program p);

/// Replaces every bounded `\forall int` in contracts and loop invariants by
/// the finite conjunction over its range. Throws TypeError when a bound is
/// not a compile-time integer.
TypedProgram unroll_spec_quantifiers(TypedProgram p);

/// Value of an integer expression built from literals, `.length` of typed
/// arrays, and + - * / unary minus; nullopt otherwise.
std::optional<std::int64_t> fold_int(const Expr& e);

/// True if any `\forall` node remains anywhere in the program.
bool has_spec_quantifiers(const Program& p);

}  // namespace floatdv::minif
