#include "floatdv/term.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace floatdv {

namespace detail {

struct Node {
  Op op = Op::BoolConst;
  Sort sort = Sort::Bool;
  std::vector<Term> args;
  FpLiteral lit{};
  std::int64_t ival = 0;
  std::string name;
  Fn fn = Fn::Sin;
  std::optional<RoundingMode> rm;
  std::vector<Term> bound;
  std::size_t hash = 0;
};

}  // namespace detail

using detail::Node;

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

std::size_t compute_hash(const Node& n) {
  std::size_t h = mix(static_cast<std::size_t>(n.op) * 131, static_cast<std::size_t>(n.sort));
  switch (n.op) {
    case Op::FpConst: h = mix(h, std::hash<std::uint64_t>{}(n.lit.bits())); break;
    case Op::BoolConst:
    case Op::IntConst: h = mix(h, std::hash<std::int64_t>{}(n.ival)); break;
    case Op::Var: h = mix(h, std::hash<std::string>{}(n.name)); break;
    case Op::Apply: h = mix(h, static_cast<std::size_t>(n.fn)); break;
    default: break;
  }
  for (const auto& a : n.args) h = mix(h, a.hash());
  for (const auto& b : n.bound) h = mix(h, b.hash());
  return h;
}

}  // namespace

Term Term::make(Node node) {
  node.hash = compute_hash(node);
  return Term(std::make_shared<const Node>(std::move(node)));
}

Op Term::op() const { return node_->op; }
Sort Term::sort() const { return node_->sort; }
std::span<const Term> Term::args() const { return node_->args; }
const FpLiteral& Term::literal() const { return node_->lit; }
bool Term::bool_value() const { return node_->ival != 0; }
std::int64_t Term::int_value() const { return node_->ival; }
const std::string& Term::name() const { return node_->name; }
Fn Term::fn() const { return node_->fn; }
std::optional<RoundingMode> Term::rounding() const { return node_->rm; }
std::span<const Term> Term::bound() const { return node_->bound; }
std::size_t Term::hash() const { return node_ ? node_->hash : 0; }

namespace {

int compare_terms(const Term& a, const Term& b) {
  if (a.is_null() || b.is_null()) return a.is_null() == b.is_null() ? 0 : (a.is_null() ? -1 : 1);
  if (a.hash() != b.hash()) return a.hash() < b.hash() ? -1 : 1;
  if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
  if (a.sort() != b.sort()) return a.sort() < b.sort() ? -1 : 1;
  switch (a.op()) {
    case Op::FpConst:
      if (a.literal().bits() != b.literal().bits()) return a.literal().bits() < b.literal().bits() ? -1 : 1;
      break;
    case Op::BoolConst:
    case Op::IntConst:
      if (a.int_value() != b.int_value()) return a.int_value() < b.int_value() ? -1 : 1;
      break;
    case Op::Var:
      if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
      break;
    case Op::Apply:
      if (a.fn() != b.fn()) return a.fn() < b.fn() ? -1 : 1;
      break;
    default: break;
  }
  auto cmp_list = [](std::span<const Term> x, std::span<const Term> y) {
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (int c = compare_terms(x[i], y[i]); c != 0) return c;
    return 0;
  };
  if (int c = cmp_list(a.bound(), b.bound()); c != 0) return c;
  return cmp_list(a.args(), b.args());
}

}  // namespace

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  return compare_terms(a, b) == 0;
}

bool operator<(const Term& a, const Term& b) { return compare_terms(a, b) < 0; }

std::string_view fn_name(Fn f) {
  switch (f) {
    case Fn::Sin: return "sinF64";
    case Fn::Cos: return "cosF64";
    case Fn::Atan: return "atanF64";
    case Fn::Sqrt: return "sqrtF64";
  }
  return "?";
}

std::string_view fn_smt_name(Fn f) {
  switch (f) {
    case Fn::Sin: return "sinDouble";
    case Fn::Cos: return "cosDouble";
    case Fn::Atan: return "atanDouble";
    case Fn::Sqrt: return "sqrtDouble";
  }
  return "?";
}

std::optional<Fn> fn_from_name(std::string_view name) {
  for (Fn f : {Fn::Sin, Fn::Cos, Fn::Atan, Fn::Sqrt})
    if (name == fn_name(f) || name == fn_smt_name(f)) return f;
  if (name == "sin") return Fn::Sin;
  if (name == "cos") return Fn::Cos;
  if (name == "atan") return Fn::Atan;
  if (name == "sqrt") return Fn::Sqrt;
  return std::nullopt;
}

namespace {

std::string op_label(Op op) {
  switch (op) {
    case Op::FpAdd: return "fp.add";
    case Op::FpSub: return "fp.sub";
    case Op::FpMul: return "fp.mul";
    case Op::FpDiv: return "fp.div";
    case Op::FpSqrt: return "fp.sqrt";
    case Op::FpNeg: return "fp.neg";
    case Op::FpAbs: return "fp.abs";
    case Op::FpLeq: return "fp.leq";
    case Op::FpLt: return "fp.lt";
    case Op::FpGeq: return "fp.geq";
    case Op::FpGt: return "fp.gt";
    case Op::FpEq: return "fp.eq";
    case Op::IsNaN: return "fp.isNaN";
    case Op::IsInfinite: return "fp.isInfinite";
    case Op::IsNormal: return "fp.isNormal";
    case Op::IsSubnormal: return "fp.isSubnormal";
    case Op::IsZero: return "fp.isZero";
    case Op::IsNegative: return "fp.isNegative";
    case Op::IsPositive: return "fp.isPositive";
    case Op::Eq: return "=";
    case Op::Ite: return "ite";
    case Op::Not: return "not";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Implies: return "=>";
    case Op::Iff: return "iff";
    case Op::Forall: return "forall";
    case Op::IntAdd: return "+";
    case Op::IntSub: return "-";
    case Op::IntMul: return "*";
    case Op::IntLeq: return "<=";
    case Op::IntLt: return "<";
    case Op::IntGeq: return ">=";
    case Op::IntGt: return ">";
    default: return "term";
  }
}

}  // namespace

namespace term {

namespace {

void expect_fp(const Term& t, Op op) {
  if (t.is_null() || !is_fp(t.sort()))
    throw SortError(op_label(op) + ": expected a float operand, got " +
                    (t.is_null() ? std::string("null") : std::string(sort_name(t.sort()))));
}

void expect_sort(const Term& t, Sort s, Op op) {
  if (t.is_null() || t.sort() != s)
    throw SortError(op_label(op) + ": expected " + std::string(sort_name(s)) + " operand, got " +
                    (t.is_null() ? std::string("null") : std::string(sort_name(t.sort()))));
}

void expect_same_fp(const Term& a, const Term& b, Op op) {
  expect_fp(a, op);
  expect_fp(b, op);
  if (a.sort() != b.sort()) throw SortError(op_label(op) + ": mixed float formats");
}

Term node(Op op, Sort sort, std::vector<Term> args, std::optional<RoundingMode> rm = std::nullopt) {
  Node n;
  n.op = op;
  n.sort = sort;
  n.args = std::move(args);
  n.rm = rm;
  return Term::make(std::move(n));
}

Term fp_binary(Op op, const Term& a, const Term& b, RoundingMode rm) {
  expect_same_fp(a, b, op);
  return node(op, a.sort(), {a, b}, rm);
}

Term fp_compare(Op op, const Term& a, const Term& b) {
  expect_same_fp(a, b, op);
  return node(op, Sort::Bool, {a, b});
}

Term classify(Op op, const Term& a) {
  expect_fp(a, op);
  return node(op, Sort::Bool, {a});
}

Term int_binary(Op op, const Term& a, const Term& b, Sort result) {
  expect_sort(a, Sort::Int, op);
  expect_sort(b, Sort::Int, op);
  return node(op, result, {a, b});
}


}  // namespace

Term fp(const FpLiteral& lit) {
  if (!is_fp(lit.format)) throw SortError("fp literal needs a float format");
  Node n;
  n.op = Op::FpConst;
  n.sort = lit.format;
  n.lit = lit;
  return Term::make(std::move(n));
}

Term fp_double(double d) { return fp(FpLiteral::from_double(d)); }

Term boolean(bool b) {
  Node n;
  n.op = Op::BoolConst;
  n.sort = Sort::Bool;
  n.ival = b ? 1 : 0;
  return Term::make(std::move(n));
}

Term integer(std::int64_t v) {
  Node n;
  n.op = Op::IntConst;
  n.sort = Sort::Int;
  n.ival = v;
  return Term::make(std::move(n));
}

Term var(std::string name, Sort sort) {
  if (name.empty()) throw SortError("variable needs a name");
  if (sort == Sort::RoundingMode) throw SortError("rounding-mode variables are not supported");
  Node n;
  n.op = Op::Var;
  n.sort = sort;
  n.name = std::move(name);
  return Term::make(std::move(n));
}

Term fp_add(const Term& a, const Term& b, RoundingMode rm) { return fp_binary(Op::FpAdd, a, b, rm); }
Term fp_sub(const Term& a, const Term& b, RoundingMode rm) { return fp_binary(Op::FpSub, a, b, rm); }
Term fp_mul(const Term& a, const Term& b, RoundingMode rm) { return fp_binary(Op::FpMul, a, b, rm); }
Term fp_div(const Term& a, const Term& b, RoundingMode rm) { return fp_binary(Op::FpDiv, a, b, rm); }

Term fp_sqrt(const Term& a, RoundingMode rm) {
  expect_fp(a, Op::FpSqrt);
  return node(Op::FpSqrt, a.sort(), {a}, rm);
}

Term fp_neg(const Term& a) {
  expect_fp(a, Op::FpNeg);
  return node(Op::FpNeg, a.sort(), {a});
}

Term fp_abs(const Term& a) {
  expect_fp(a, Op::FpAbs);
  return node(Op::FpAbs, a.sort(), {a});
}

Term fp_leq(const Term& a, const Term& b) { return fp_compare(Op::FpLeq, a, b); }
Term fp_lt(const Term& a, const Term& b) { return fp_compare(Op::FpLt, a, b); }
Term fp_geq(const Term& a, const Term& b) { return fp_compare(Op::FpGeq, a, b); }
Term fp_gt(const Term& a, const Term& b) { return fp_compare(Op::FpGt, a, b); }
Term fp_eq(const Term& a, const Term& b) { return fp_compare(Op::FpEq, a, b); }

Term is_nan(const Term& a) { return classify(Op::IsNaN, a); }
Term is_infinite(const Term& a) { return classify(Op::IsInfinite, a); }
Term is_normal(const Term& a) { return classify(Op::IsNormal, a); }
Term is_subnormal(const Term& a) { return classify(Op::IsSubnormal, a); }
Term is_zero(const Term& a) { return classify(Op::IsZero, a); }
Term is_negative(const Term& a) { return classify(Op::IsNegative, a); }
Term is_positive(const Term& a) { return classify(Op::IsPositive, a); }

Term eq(const Term& a, const Term& b) {
  if (a.is_null() || b.is_null() || a.sort() != b.sort()) throw SortError("=: operands of different sorts");
  return node(Op::Eq, Sort::Bool, {a, b});
}

Term ite(const Term& c, const Term& t, const Term& e) {
  expect_sort(c, Sort::Bool, Op::Ite);
  if (t.is_null() || e.is_null() || t.sort() != e.sort()) throw SortError("ite: branches of different sorts");
  if (t == e) return t;
  if (c.op() == Op::BoolConst) return c.bool_value() ? t : e;
  return node(Op::Ite, t.sort(), {c, t, e});
}

Term not_(const Term& a) {
  expect_sort(a, Sort::Bool, Op::Not);
  if (a.op() == Op::BoolConst) return boolean(!a.bool_value());
  return node(Op::Not, Sort::Bool, {a});
}

Term and_(std::vector<Term> parts) {
  for (const auto& p : parts) {
    expect_sort(p, Sort::Bool, Op::And);
    if (p.op() == Op::BoolConst && !p.bool_value()) return boolean(false);
  }
  std::erase_if(parts, [](const Term& p) { return p.op() == Op::BoolConst && p.bool_value(); });
  if (parts.empty()) return boolean(true);
  if (parts.size() == 1) return parts.front();
  return node(Op::And, Sort::Bool, std::move(parts));
}

Term or_(std::vector<Term> parts) {
  for (const auto& p : parts) {
    expect_sort(p, Sort::Bool, Op::Or);
    if (p.op() == Op::BoolConst && p.bool_value()) return boolean(true);
  }
  std::erase_if(parts, [](const Term& p) { return p.op() == Op::BoolConst && !p.bool_value(); });
  if (parts.empty()) return boolean(false);
  if (parts.size() == 1) return parts.front();
  return node(Op::Or, Sort::Bool, std::move(parts));
}

Term implies(const Term& a, const Term& b) {
  expect_sort(a, Sort::Bool, Op::Implies);
  expect_sort(b, Sort::Bool, Op::Implies);
  if (a.op() == Op::BoolConst && a.bool_value()) return b;
  return node(Op::Implies, Sort::Bool, {a, b});
}

Term iff(const Term& a, const Term& b) {
  expect_sort(a, Sort::Bool, Op::Iff);
  expect_sort(b, Sort::Bool, Op::Iff);
  return node(Op::Iff, Sort::Bool, {a, b});
}

Term forall(std::vector<Term> vars, const Term& body) {
  expect_sort(body, Sort::Bool, Op::Forall);
  if (vars.empty()) return body;
  for (const auto& v : vars)
    if (v.is_null() || v.op() != Op::Var) throw SortError("forall: bound items must be variables");
  Node n;
  n.op = Op::Forall;
  n.sort = Sort::Bool;
  n.args = {body};
  n.bound = std::move(vars);
  return Term::make(std::move(n));
}

Term apply(Fn f, const Term& arg) {
  expect_sort(arg, Sort::Float64, Op::Apply);
  Node n;
  n.op = Op::Apply;
  n.sort = Sort::Float64;
  n.fn = f;
  n.args = {arg};
  return Term::make(std::move(n));
}

Term int_add(const Term& a, const Term& b) { return int_binary(Op::IntAdd, a, b, Sort::Int); }
Term int_sub(const Term& a, const Term& b) { return int_binary(Op::IntSub, a, b, Sort::Int); }
Term int_mul(const Term& a, const Term& b) { return int_binary(Op::IntMul, a, b, Sort::Int); }
Term int_leq(const Term& a, const Term& b) { return int_binary(Op::IntLeq, a, b, Sort::Bool); }
Term int_lt(const Term& a, const Term& b) { return int_binary(Op::IntLt, a, b, Sort::Bool); }
Term int_geq(const Term& a, const Term& b) { return int_binary(Op::IntGeq, a, b, Sort::Bool); }
Term int_gt(const Term& a, const Term& b) { return int_binary(Op::IntGt, a, b, Sort::Bool); }

Term rebuild(const Term& t, std::vector<Term> a) {
  switch (t.op()) {
    case Op::FpConst:
    case Op::BoolConst:
    case Op::IntConst:
    case Op::Var: return t;
    case Op::FpAdd: return fp_add(a[0], a[1], *t.rounding());
    case Op::FpSub: return fp_sub(a[0], a[1], *t.rounding());
    case Op::FpMul: return fp_mul(a[0], a[1], *t.rounding());
    case Op::FpDiv: return fp_div(a[0], a[1], *t.rounding());
    case Op::FpSqrt: return fp_sqrt(a[0], *t.rounding());
    case Op::FpNeg: return fp_neg(a[0]);
    case Op::FpAbs: return fp_abs(a[0]);
    case Op::FpLeq: return fp_leq(a[0], a[1]);
    case Op::FpLt: return fp_lt(a[0], a[1]);
    case Op::FpGeq: return fp_geq(a[0], a[1]);
    case Op::FpGt: return fp_gt(a[0], a[1]);
    case Op::FpEq: return fp_eq(a[0], a[1]);
    case Op::IsNaN: return is_nan(a[0]);
    case Op::IsInfinite: return is_infinite(a[0]);
    case Op::IsNormal: return is_normal(a[0]);
    case Op::IsSubnormal: return is_subnormal(a[0]);
    case Op::IsZero: return is_zero(a[0]);
    case Op::IsNegative: return is_negative(a[0]);
    case Op::IsPositive: return is_positive(a[0]);
    case Op::Eq: return eq(a[0], a[1]);
    case Op::Ite: return ite(a[0], a[1], a[2]);
    case Op::Not: return not_(a[0]);
    case Op::And: return and_(std::move(a));
    case Op::Or: return or_(std::move(a));
    case Op::Implies: return implies(a[0], a[1]);
    case Op::Iff: return iff(a[0], a[1]);
    case Op::Forall: return forall({t.bound().begin(), t.bound().end()}, a[0]);
    case Op::Apply: return apply(t.fn(), a[0]);
    case Op::IntAdd: return int_add(a[0], a[1]);
    case Op::IntSub: return int_sub(a[0], a[1]);
    case Op::IntMul: return int_mul(a[0], a[1]);
    case Op::IntLeq: return int_leq(a[0], a[1]);
    case Op::IntLt: return int_lt(a[0], a[1]);
    case Op::IntGeq: return int_geq(a[0], a[1]);
    case Op::IntGt: return int_gt(a[0], a[1]);
  }
  throw SortError("rebuild: unknown node");
}

}  // namespace term

// ---------------------------------------------------------------------------
// Specification predicates

namespace {

struct PredInfo {
  SpecPredicate pred;
  std::string_view name;
  std::size_t arity;
};

constexpr PredInfo kPredicates[] = {
    {SpecPredicate::FpNaN, "fp_nan", 1},           {SpecPredicate::FpInfinite, "fp_infinite", 1},
    {SpecPredicate::FpNice, "fp_nice", 1},         {SpecPredicate::FpNormal, "fp_normal", 1},
    {SpecPredicate::FpSubnormal, "fp_subnormal", 1}, {SpecPredicate::FpZero, "fp_zero", 1},
    {SpecPredicate::FpNegative, "fp_negative", 1}, {SpecPredicate::FpPositive, "fp_positive", 1},
    {SpecPredicate::FpBitEq, "fp_bitEq", 2},
};

const PredInfo& info(SpecPredicate p) {
  for (const auto& i : kPredicates)
    if (i.pred == p) return i;
  throw SortError("unknown spec predicate");
}

}  // namespace

std::optional<SpecPredicate> spec_predicate_from_name(std::string_view name) {
  if (!name.empty() && name.front() == '\\') name.remove_prefix(1);
  for (const auto& i : kPredicates)
    if (i.name == name) return i.pred;
  return std::nullopt;
}

std::string_view spec_predicate_name(SpecPredicate p) { return info(p).name; }
std::size_t spec_predicate_arity(SpecPredicate p) { return info(p).arity; }

Term build_spec_predicate(SpecPredicate pred, std::span<const Term> args) {
  const auto& i = info(pred);
  if (args.size() != i.arity)
    throw SortError(std::string(i.name) + ": expected " + std::to_string(i.arity) + " argument(s), got " +
                    std::to_string(args.size()));
  for (const auto& a : args)
    if (a.is_null() || !is_fp(a.sort())) throw SortError(std::string(i.name) + ": operand is not a float");
  switch (pred) {
    case SpecPredicate::FpNaN: return term::is_nan(args[0]);
    case SpecPredicate::FpInfinite: return term::is_infinite(args[0]);
    case SpecPredicate::FpNice: return term::and_({term::not_(term::is_nan(args[0])), term::not_(term::is_infinite(args[0]))});
    case SpecPredicate::FpNormal: return term::is_normal(args[0]);
    case SpecPredicate::FpSubnormal: return term::is_subnormal(args[0]);
    case SpecPredicate::FpZero: return term::is_zero(args[0]);
    case SpecPredicate::FpNegative: return term::is_negative(args[0]);
    case SpecPredicate::FpPositive: return term::is_positive(args[0]);
    case SpecPredicate::FpBitEq:
      if (args[0].sort() != args[1].sort()) throw SortError("fp_bitEq: mixed float formats");
      return term::eq(args[0], args[1]);
  }
  throw SortError("unknown spec predicate");
}

// ---------------------------------------------------------------------------
// Traversals

namespace {

void collect_free(const Term& t, std::set<std::string>& bound_names, std::set<Term>& out) {
  if (t.op() == Op::Var) {
    if (!bound_names.contains(t.name())) out.insert(t);
    return;
  }
  if (t.op() == Op::Forall) {
    std::vector<std::string> added;
    for (const auto& b : t.bound())
      if (bound_names.insert(b.name()).second) added.push_back(b.name());
    collect_free(t.arg(0), bound_names, out);
    for (const auto& n : added) bound_names.erase(n);
    return;
  }
  for (const auto& a : t.args()) collect_free(a, bound_names, out);
}

template <class Pred>
bool any_node(const Term& t, Pred pred, std::unordered_set<std::size_t>& seen_hashes) {
  if (pred(t)) return true;
  if (t.args().empty()) return false;
  if (!seen_hashes.insert(t.hash()).second) return false;
  for (const auto& a : t.args())
    if (any_node(a, pred, seen_hashes)) return true;
  return false;
}

}  // namespace

std::set<Term> free_vars(const Term& t) {
  std::set<Term> out;
  std::set<std::string> bound;
  collect_free(t, bound, out);
  return out;
}

bool contains_op(const Term& t, Op op) {
  std::unordered_set<std::size_t> seen;
  return any_node(t, [op](const Term& n) { return n.op() == op; }, seen);
}

bool contains_quantifier(const Term& t) { return contains_op(t, Op::Forall); }

bool contains_sort(const Term& t, Sort s) {
  std::unordered_set<std::size_t> seen;
  return any_node(t, [s](const Term& n) {
    if (n.sort() == s) return true;
    for (const auto& b : n.bound())
      if (b.sort() == s) return true;
    return false;
  }, seen);
}

namespace {

Term subst_rec(const Term& t, const Binding& binding, std::unordered_map<Term, Term, TermHash>& memo) {
  if (t.op() == Op::Var) {
    auto it = binding.find(t.name());
    if (it == binding.end()) return t;
    if (it->second.sort() != t.sort())
      throw SortError("substitute: " + t.name() + " has sort " + std::string(sort_name(t.sort())) +
                      " but replacement has sort " + std::string(sort_name(it->second.sort())));
    return it->second;
  }
  if (t.args().empty()) return t;
  if (auto m = memo.find(t); m != memo.end()) return m->second;

  Term result;
  if (t.op() == Op::Forall) {
    Binding inner = binding;
    for (const auto& b : t.bound()) inner.erase(b.name());
    if (inner.empty()) return t;
    // Rename bound variables that would capture a free variable of a replacement.
    std::set<std::string> replacement_free;
    for (const auto& [name, repl] : inner)
      for (const auto& fv : free_vars(repl)) replacement_free.insert(fv.name());
    std::set<std::string> taken = replacement_free;
    for (const auto& fv : free_vars(t.arg(0))) taken.insert(fv.name());
    std::vector<Term> new_bound;
    for (const auto& b : t.bound()) {
      if (!replacement_free.contains(b.name())) {
        new_bound.push_back(b);
        continue;
      }
      std::string fresh = b.name();
      int k = 0;
      do fresh = b.name() + "!" + std::to_string(++k);
      while (taken.contains(fresh));
      taken.insert(fresh);
      Term renamed = term::var(fresh, b.sort());
      inner[b.name()] = renamed;
      new_bound.push_back(renamed);
    }
    std::unordered_map<Term, Term, TermHash> inner_memo;
    result = term::forall(std::move(new_bound), subst_rec(t.arg(0), inner, inner_memo));
  } else {
    std::vector<Term> args;
    args.reserve(t.args().size());
    bool changed = false;
    for (const auto& a : t.args()) {
      args.push_back(subst_rec(a, binding, memo));
      changed = changed || !(args.back().hash() == a.hash() && args.back() == a);
    }
    result = changed ? term::rebuild(t, std::move(args)) : t;
  }
  memo.emplace(t, result);
  return result;
}

}  // namespace

Term substitute(const Term& t, const Binding& binding) {
  if (binding.empty()) return t;
  std::unordered_map<Term, Term, TermHash> memo;
  return subst_rec(t, binding, memo);
}

// ---------------------------------------------------------------------------
// Pretty printing

namespace {

void print(const Term& t, std::ostream& os) {
  switch (t.op()) {
    case Op::FpConst:
      os << to_decimal_string(t.literal());
      if (t.sort() == Sort::Float32) os << 'f';
      return;
    case Op::BoolConst: os << (t.bool_value() ? "true" : "false"); return;
    case Op::IntConst: os << t.int_value(); return;
    case Op::Var: os << t.name(); return;
    case Op::Forall:
      os << "(forall (";
      for (std::size_t i = 0; i < t.bound().size(); ++i) {
        if (i) os << ' ';
        os << '(' << t.bound()[i].name() << ' ' << sort_name(t.bound()[i].sort()) << ')';
      }
      os << ") ";
      print(t.arg(0), os);
      os << ')';
      return;
    case Op::Apply:
      os << '(' << fn_name(t.fn()) << ' ';
      print(t.arg(0), os);
      os << ')';
      return;
    default: break;
  }
  os << '(' << op_label(t.op());
  if (t.rounding()) os << " RNE";
  for (const auto& a : t.args()) {
    os << ' ';
    print(a, os);
  }
  os << ')';
}

}  // namespace

std::string to_string(const Term& t) {
  if (t.is_null()) return "<null>";
  std::ostringstream os;
  print(t, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Concrete evaluation

namespace fparith {

namespace {

template <class F64, class F32>
FpLiteral binary(const FpLiteral& a, const FpLiteral& b, F64 f64, F32 f32) {
  if (a.format != b.format) throw EvalError("mixed float formats");
  if (a.format == Sort::Float64) return FpLiteral::from_double(f64(a.to_double(), b.to_double()));
  return FpLiteral::from_float(f32(a.to_float(), b.to_float()));
}

}  // namespace

FpLiteral add(const FpLiteral& a, const FpLiteral& b) {
  return binary(a, b, [](double x, double y) { return x + y; }, [](float x, float y) { return x + y; });
}
FpLiteral sub(const FpLiteral& a, const FpLiteral& b) {
  return binary(a, b, [](double x, double y) { return x - y; }, [](float x, float y) { return x - y; });
}
FpLiteral mul(const FpLiteral& a, const FpLiteral& b) {
  return binary(a, b, [](double x, double y) { return x * y; }, [](float x, float y) { return x * y; });
}
FpLiteral div(const FpLiteral& a, const FpLiteral& b) {
  return binary(a, b, [](double x, double y) { return x / y; }, [](float x, float y) { return x / y; });
}
FpLiteral sqrt(const FpLiteral& a) {
  if (a.format == Sort::Float64) return FpLiteral::from_double(std::sqrt(a.to_double()));
  return FpLiteral::from_float(std::sqrt(a.to_float()));
}
FpLiteral neg(const FpLiteral& a) { return a.negated(); }
FpLiteral abs(const FpLiteral& a) {
  if (a.is_nan()) return a;
  FpLiteral r = a;
  r.sign = false;
  return r;
}

namespace {
double as_double(const FpLiteral& a) { return a.format == Sort::Float64 ? a.to_double() : static_cast<double>(a.to_float()); }
}  // namespace

bool leq(const FpLiteral& a, const FpLiteral& b) { return as_double(a) <= as_double(b); }
bool lt(const FpLiteral& a, const FpLiteral& b) { return as_double(a) < as_double(b); }
bool ieee_eq(const FpLiteral& a, const FpLiteral& b) { return as_double(a) == as_double(b); }

}  // namespace fparith

std::optional<FpLiteral> host_library(Fn f, const FpLiteral& arg) {
  if (arg.format != Sort::Float64) return std::nullopt;
  const double x = arg.to_double();
  switch (f) {
    case Fn::Sin: return FpLiteral::from_double(std::sin(x));
    case Fn::Cos: return FpLiteral::from_double(std::cos(x));
    case Fn::Atan: return FpLiteral::from_double(std::atan(x));
    case Fn::Sqrt: return FpLiteral::from_double(std::sqrt(x));
  }
  return std::nullopt;
}

namespace {

const FpLiteral& as_fp(const Value& v) {
  if (auto p = std::get_if<FpLiteral>(&v)) return *p;
  throw EvalError("expected a float value");
}
bool as_bool(const Value& v) {
  if (auto p = std::get_if<bool>(&v)) return *p;
  throw EvalError("expected a boolean value");
}
std::int64_t as_int(const Value& v) {
  if (auto p = std::get_if<std::int64_t>(&v)) return *p;
  throw EvalError("expected an integer value");
}

Value eval(const Term& t, const Assignment& env, const FnInterpretation& fns) {
  auto a = [&](std::size_t i) { return eval(t.arg(i), env, fns); };
  switch (t.op()) {
    case Op::FpConst: return t.literal();
    case Op::BoolConst: return t.bool_value();
    case Op::IntConst: return t.int_value();
    case Op::Var: {
      auto it = env.find(t.name());
      if (it == env.end()) throw EvalError("no value for variable " + t.name());
      return it->second;
    }
    case Op::FpAdd: return fparith::add(as_fp(a(0)), as_fp(a(1)));
    case Op::FpSub: return fparith::sub(as_fp(a(0)), as_fp(a(1)));
    case Op::FpMul: return fparith::mul(as_fp(a(0)), as_fp(a(1)));
    case Op::FpDiv: return fparith::div(as_fp(a(0)), as_fp(a(1)));
    case Op::FpSqrt: return fparith::sqrt(as_fp(a(0)));
    case Op::FpNeg: return fparith::neg(as_fp(a(0)));
    case Op::FpAbs: return fparith::abs(as_fp(a(0)));
    case Op::FpLeq: return fparith::leq(as_fp(a(0)), as_fp(a(1)));
    case Op::FpLt: return fparith::lt(as_fp(a(0)), as_fp(a(1)));
    case Op::FpGeq: return fparith::leq(as_fp(a(1)), as_fp(a(0)));
    case Op::FpGt: return fparith::lt(as_fp(a(1)), as_fp(a(0)));
    case Op::FpEq: return fparith::ieee_eq(as_fp(a(0)), as_fp(a(1)));
    case Op::IsNaN: return as_fp(a(0)).is_nan();
    case Op::IsInfinite: return as_fp(a(0)).is_infinite();
    case Op::IsNormal: return as_fp(a(0)).is_normal();
    case Op::IsSubnormal: return as_fp(a(0)).is_subnormal();
    case Op::IsZero: return as_fp(a(0)).is_zero();
    case Op::IsNegative: return as_fp(a(0)).is_negative();
    case Op::IsPositive: {
      const auto& v = as_fp(a(0));
      return !v.is_nan() && !v.sign;
    }
    case Op::Eq: {
      Value x = a(0), y = a(1);
      if (auto fx = std::get_if<FpLiteral>(&x)) return *fx == as_fp(y);
      return x == y;
    }
    case Op::Ite: return as_bool(a(0)) ? a(1) : a(2);
    case Op::Not: return !as_bool(a(0));
    case Op::And:
      for (std::size_t i = 0; i < t.args().size(); ++i)
        if (!as_bool(a(i))) return false;
      return true;
    case Op::Or:
      for (std::size_t i = 0; i < t.args().size(); ++i)
        if (as_bool(a(i))) return true;
      return false;
    case Op::Implies: return !as_bool(a(0)) || as_bool(a(1));
    case Op::Iff: return as_bool(a(0)) == as_bool(a(1));
    case Op::Forall: throw EvalError("cannot evaluate a quantified formula");
    case Op::Apply: {
      auto r = fns ? fns(t.fn(), as_fp(a(0))) : std::nullopt;
      if (!r) throw EvalError(std::string("no interpretation for ") + std::string(fn_name(t.fn())));
      return *r;
    }
    case Op::IntAdd: return as_int(a(0)) + as_int(a(1));
    case Op::IntSub: return as_int(a(0)) - as_int(a(1));
    case Op::IntMul: return as_int(a(0)) * as_int(a(1));
    case Op::IntLeq: return as_int(a(0)) <= as_int(a(1));
    case Op::IntLt: return as_int(a(0)) < as_int(a(1));
    case Op::IntGeq: return as_int(a(0)) >= as_int(a(1));
    case Op::IntGt: return as_int(a(0)) > as_int(a(1));
  }
  throw EvalError("unknown node");
}

}  // namespace

Value evaluate(const Term& t, const Assignment& env, const FnInterpretation& fns) { return eval(t, env, fns); }

bool evaluate_bool(const Term& t, const Assignment& env, const FnInterpretation& fns) {
  return as_bool(eval(t, env, fns));
}

}  // namespace floatdv
