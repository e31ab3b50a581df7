#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "floatdv/fp_literal.hpp"

namespace floatdv {

enum class Op : std::uint8_t {
  FpConst, BoolConst, IntConst, Var,
  // rounded arithmetic (carry a rounding mode)
  FpAdd, FpSub, FpMul, FpDiv, FpSqrt,
  // exact arithmetic
  FpNeg, FpAbs,
  // IEEE comparisons
  FpLeq, FpLt, FpGeq, FpGt, FpEq,
  // classification
  IsNaN, IsInfinite, IsNormal, IsSubnormal, IsZero, IsNegative, IsPositive,
  // SMT `=`: bit identity on floats (NaN = NaN, +0 != -0)
  Eq,
  Ite, Not, And, Or, Implies, Iff,
  Forall,
  // uninterpreted Float64 -> Float64 library function
  Apply,
  IntAdd, IntSub, IntMul, IntLeq, IntLt, IntGeq, IntGt,
};

enum class RoundingMode : std::uint8_t { RNE };

/// Library functions modelled as uninterpreted symbols over Float64.
enum class Fn : std::uint8_t { Sin, Cos, Atan, Sqrt };

/// IR name of the symbol (sinF64, ...).
std::string_view fn_name(Fn f);
/// Name used in emitted SMT-LIB (sinDouble, ...).
std::string_view fn_smt_name(Fn f);
std::optional<Fn> fn_from_name(std::string_view name);

class SortError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
struct Node;
}

/// Immutable, shared formula tree. Copies are cheap; equality is structural.
class Term {
 public:
  Term() = default;

  Op op() const;
  Sort sort() const;
  std::span<const Term> args() const;
  const Term& arg(std::size_t i) const { return args()[i]; }
  const FpLiteral& literal() const;       // FpConst
  bool bool_value() const;                // BoolConst
  std::int64_t int_value() const;         // IntConst
  const std::string& name() const;        // Var
  Fn fn() const;                          // Apply
  std::optional<RoundingMode> rounding() const;
  std::span<const Term> bound() const;    // Forall
  std::size_t hash() const;

  bool is_null() const { return !node_; }
  explicit operator bool() const { return static_cast<bool>(node_); }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator<(const Term& a, const Term& b);  // total order for sets

  static Term make(detail::Node node);

 private:
  explicit Term(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Well-sorted term constructors. Each throws SortError on ill-sorted input.
namespace term {

Term fp(const FpLiteral& lit);
Term fp_double(double d);
Term boolean(bool b);
Term integer(std::int64_t v);
Term var(std::string name, Sort sort);

Term fp_add(const Term& a, const Term& b, RoundingMode rm = RoundingMode::RNE);
Term fp_sub(const Term& a, const Term& b, RoundingMode rm = RoundingMode::RNE);
Term fp_mul(const Term& a, const Term& b, RoundingMode rm = RoundingMode::RNE);
Term fp_div(const Term& a, const Term& b, RoundingMode rm = RoundingMode::RNE);
Term fp_sqrt(const Term& a, RoundingMode rm = RoundingMode::RNE);
Term fp_neg(const Term& a);
Term fp_abs(const Term& a);

Term fp_leq(const Term& a, const Term& b);
Term fp_lt(const Term& a, const Term& b);
Term fp_geq(const Term& a, const Term& b);
Term fp_gt(const Term& a, const Term& b);
Term fp_eq(const Term& a, const Term& b);

Term is_nan(const Term& a);
Term is_infinite(const Term& a);
Term is_normal(const Term& a);
Term is_subnormal(const Term& a);
Term is_zero(const Term& a);
Term is_negative(const Term& a);
Term is_positive(const Term& a);

Term eq(const Term& a, const Term& b);
Term ite(const Term& c, const Term& t, const Term& e);
Term not_(const Term& a);
Term and_(std::vector<Term> parts);
Term or_(std::vector<Term> parts);
Term implies(const Term& a, const Term& b);
Term iff(const Term& a, const Term& b);
Term forall(std::vector<Term> vars, const Term& body);
Term apply(Fn f, const Term& arg);

Term int_add(const Term& a, const Term& b);
Term int_sub(const Term& a, const Term& b);
Term int_mul(const Term& a, const Term& b);
Term int_leq(const Term& a, const Term& b);
Term int_lt(const Term& a, const Term& b);
Term int_geq(const Term& a, const Term& b);
Term int_gt(const Term& a, const Term& b);

/// Rebuilds a node of the same kind over new children (sorts re-checked).
Term rebuild(const Term& t, std::vector<Term> args);

}  // namespace term

/// Specification-level predicates and their IR expansion.
enum class SpecPredicate { FpNaN, FpInfinite, FpNice, FpNormal, FpSubnormal, FpZero, FpNegative, FpPositive, FpBitEq };

std::optional<SpecPredicate> spec_predicate_from_name(std::string_view name);
std::string_view spec_predicate_name(SpecPredicate p);
std::size_t spec_predicate_arity(SpecPredicate p);

/// fp_nice expands to (not NaN) and (not infinite); fp_bitEq to the bitwise
/// equality node; the rest to one classification node.
Term build_spec_predicate(SpecPredicate pred, std::span<const Term> args);

using Binding = std::map<std::string, Term>;

/// Capture-avoiding simultaneous substitution of free variables (by name).
Term substitute(const Term& t, const Binding& binding);

std::set<Term> free_vars(const Term& t);
bool contains_quantifier(const Term& t);
bool contains_op(const Term& t, Op op);
bool contains_sort(const Term& t, Sort s);

/// Debug rendering in prefix notation; stable across runs.
std::string to_string(const Term& t);

using Value = std::variant<bool, std::int64_t, FpLiteral>;
using Assignment = std::map<std::string, Value>;
/// Interpretation of uninterpreted applications; nullopt means "unknown".
using FnInterpretation = std::function<std::optional<FpLiteral>(Fn, const FpLiteral&)>;

/// Host math library interpretation (std::sin etc.; sqrt is exact).
std::optional<FpLiteral> host_library(Fn f, const FpLiteral& arg);

/// Concrete evaluation with IEEE-754 RNE semantics in each operand format.
/// Throws EvalError on free variables without a value, quantifiers, or
/// applications the interpretation leaves unknown.
Value evaluate(const Term& t, const Assignment& env, const FnInterpretation& fns = host_library);
bool evaluate_bool(const Term& t, const Assignment& env, const FnInterpretation& fns = host_library);

/// Host-arithmetic helpers shared with the interpreter.
namespace fparith {
FpLiteral add(const FpLiteral& a, const FpLiteral& b);
FpLiteral sub(const FpLiteral& a, const FpLiteral& b);
FpLiteral mul(const FpLiteral& a, const FpLiteral& b);
FpLiteral div(const FpLiteral& a, const FpLiteral& b);
FpLiteral sqrt(const FpLiteral& a);
FpLiteral neg(const FpLiteral& a);
FpLiteral abs(const FpLiteral& a);
bool leq(const FpLiteral& a, const FpLiteral& b);
bool lt(const FpLiteral& a, const FpLiteral& b);
bool ieee_eq(const FpLiteral& a, const FpLiteral& b);
}  // namespace fparith

}  // namespace floatdv

template <>
struct std::hash<floatdv::Term> {
  std::size_t operator()(const floatdv::Term& t) const { return t.hash(); }
};
