#include "floatdv/axioms.hpp"

#include <numbers>
#include <set>
#include <stdexcept>

namespace floatdv {

namespace t = term;

Term axiom_variable() { return t::var("a", Sort::Float64); }

namespace {

Term f64(double d) { return t::fp_double(d); }

// fp_nice(a): neither NaN nor infinite.
Term nice(const Term& a) { return t::and_({t::not_(t::is_nan(a)), t::not_(t::is_infinite(a))}); }

Term zero_sign(const Term& a, const Term& fa) {
  return t::implies(t::is_zero(a), t::and_({t::is_zero(fa), t::iff(t::is_negative(fa), t::is_negative(a))}));
}

Term between(const Term& fa, double bound) { return t::and_({t::fp_leq(fa, f64(bound)), t::fp_geq(fa, f64(-bound))}); }

Term nan_or_inf(const Term& a, const Term& fa) {
  return t::implies(t::or_({t::is_nan(a), t::is_infinite(a)}), t::is_nan(fa));
}

}  // namespace

std::vector<AxiomSchema> axiom_pack(Fn f) {
  const Term a = axiom_variable();
  const Term fa = t::apply(f, a);
  // Largest double not above pi/2; it is also the nearest one.
  const double half_pi = std::numbers::pi / 2;
  switch (f) {
    case Fn::Sin:
      return {
          {"sin.nan-or-inf", f, "If arg is NaN or an infinity, then sin(arg) is NaN.", nan_or_inf(a, fa)},
          {"sin.zero-sign", f, "If arg is a zero, then sin(arg) is a zero with the same sign.", zero_sign(a, fa)},
          {"sin.range", f, "If arg is neither NaN nor an infinity, then sin(arg) is between -1.0 and 1.0.",
           t::implies(nice(a), between(fa, 1.0))},
          {"sin.not-nan", f, "If arg is neither NaN nor an infinity, then sin(arg) is not NaN.",
           t::implies(nice(a), t::not_(t::is_nan(fa)))},
      };
    case Fn::Cos:
      return {
          {"cos.nan-or-inf", f, "If arg is NaN or an infinity, then cos(arg) is NaN.", nan_or_inf(a, fa)},
          {"cos.range", f, "If arg is neither NaN nor an infinity, then cos(arg) is between -1.0 and 1.0.",
           t::implies(nice(a), between(fa, 1.0))},
          {"cos.not-nan", f, "If arg is neither NaN nor an infinity, then cos(arg) is not NaN.",
           t::implies(nice(a), t::not_(t::is_nan(fa)))},
      };
    case Fn::Atan:
      return {
          {"atan.nan-or-inf", f, "If arg is NaN or an infinity, then atan(arg) is NaN.", nan_or_inf(a, fa)},
          {"atan.zero-sign", f, "If arg is a zero, then atan(arg) is a zero with the same sign.", zero_sign(a, fa)},
          {"atan.range", f, "If arg is not NaN, then atan(arg) is between -pi/2 and pi/2.",
           t::implies(t::not_(t::is_nan(a)), between(fa, half_pi))},
      };
    case Fn::Sqrt: {
      const Term zero = f64(0.0);
      const Term inf = t::fp(FpLiteral::infinity(Sort::Float64, false));
      return {
          {"sqrt.nan-or-negative", f, "If arg is NaN or less than zero, then sqrt(arg) is NaN.",
           t::implies(t::or_({t::is_nan(a), t::fp_lt(a, zero)}), t::is_nan(fa))},
          {"sqrt.pos-inf", f, "If arg is positive infinity, then sqrt(arg) is positive infinity.",
           t::implies(t::eq(a, inf), t::eq(fa, inf))},
          {"sqrt.zero", f, "If arg is positive or negative zero, then sqrt(arg) is the same as arg.",
           t::implies(t::is_zero(a), t::eq(fa, a))},
          {"sqrt.not-nan", f, "If arg is not NaN and greater than or equal to zero, then sqrt(arg) is not NaN.",
           t::implies(t::and_({t::not_(t::is_nan(a)), t::fp_geq(a, zero)}), t::not_(t::is_nan(fa)))},
          {"sqrt.monotone-below", f, "If arg is not an infinity and greater than 1, then sqrt(arg) < arg.",
           t::implies(t::and_({t::not_(t::is_infinite(a)), t::fp_gt(a, f64(1.0))}), t::fp_lt(fa, a))},
      };
    }
  }
  throw std::invalid_argument("no axiom pack for this function");
}

std::vector<AxiomSchema> axiom_pack(std::string_view symbol) {
  if (symbol == "sin" || symbol == "sinF64" || symbol == "sinDouble") return axiom_pack(Fn::Sin);
  if (symbol == "cos" || symbol == "cosF64" || symbol == "cosDouble") return axiom_pack(Fn::Cos);
  if (symbol == "atan" || symbol == "atanF64" || symbol == "atanDouble") return axiom_pack(Fn::Atan);
  if (symbol == "sqrt" || symbol == "sqrtF64" || symbol == "sqrtDouble") return axiom_pack(Fn::Sqrt);
  throw std::invalid_argument("no axiom pack for '" + std::string(symbol) + "'");
}

std::vector<AxiomSchema> all_axioms() {
  std::vector<AxiomSchema> out;
  for (Fn f : {Fn::Sin, Fn::Cos, Fn::Atan, Fn::Sqrt})
    for (auto& s : axiom_pack(f)) out.push_back(std::move(s));
  return out;
}

std::vector<Term> quantified_axioms(const std::vector<AxiomSchema>& schemas) {
  std::vector<Term> out;
  for (const auto& s : schemas) out.push_back(t::forall({axiom_variable()}, s.tmpl));
  return out;
}

std::vector<Term> ground_instances(const std::vector<AxiomSchema>& schemas, const std::vector<Occurrence>& occurrences) {
  std::vector<Term> out;
  std::set<Term> seen;
  for (const auto& occ : occurrences) {
    bool any = false;
    for (const auto& s : schemas) {
      if (s.symbol != occ.fn) continue;
      any = true;
      Term inst = substitute(s.tmpl, {{"a", occ.arg}});
      if (seen.insert(inst).second) out.push_back(std::move(inst));
    }
    if (!any) throw std::invalid_argument("no axioms for " + std::string(fn_name(occ.fn)));
  }
  return out;
}

std::string axiom_catalog_markdown() {
  std::string s = "# Library function axioms\n\n"
                  "Each axiom is stated for a `double` argument `a`. The solver sees the\n"
                  "functions as uninterpreted symbols `sinDouble`, `cosDouble`, `atanDouble`\n"
                  "and (with `--sqrt-mode axioms`) `sqrtDouble`. With `--trans-mode smt-axioms`\n"
                  "every axiom of a function that occurs in a goal is asserted under\n"
                  "`forall ((a Float64))`; with `--trans-mode ground-inst` it is instantiated\n"
                  "at each argument the function is applied to.\n";
  Fn last = Fn::Sqrt;
  bool first = true;
  for (const auto& ax : all_axioms()) {
    if (first || ax.symbol != last) {
      s += "\n## " + std::string(fn_smt_name(ax.symbol)) + "\n\n| id | statement | formula |\n|---|---|---|\n";
      last = ax.symbol;
      first = false;
    }
    s += "| `" + ax.id + "` | " + ax.text + " | `" + to_string(ax.tmpl) + "` |\n";
  }
  return s;
}

}  // namespace floatdv
