#include "floatdv/smt_emit.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "floatdv/axioms.hpp"

namespace floatdv {

std::string_view trans_mode_name(TransMode m) { return m == TransMode::SmtAxioms ? "smt-axioms" : "ground-inst"; }
std::string_view sqrt_mode_name(SqrtMode m) { return m == SqrtMode::Builtin ? "builtin" : "axioms"; }

TransMode parse_trans_mode(std::string_view s) {
  if (s == "smt-axioms") return TransMode::SmtAxioms;
  if (s == "ground-inst") return TransMode::GroundInst;
  throw std::invalid_argument("unknown translation mode '" + std::string(s) + "' (expected smt-axioms or ground-inst)");
}

SqrtMode parse_sqrt_mode(std::string_view s) {
  if (s == "builtin") return SqrtMode::Builtin;
  if (s == "axioms") return SqrtMode::Axioms;
  throw std::invalid_argument("unknown sqrt mode '" + std::string(s) + "' (expected builtin or axioms)");
}

namespace {

std::string bits(std::uint64_t v, unsigned width) {
  std::string s(width, '0');
  for (unsigned i = 0; i < width; ++i)
    if (v >> (width - 1 - i) & 1u) s[i] = '1';
  return s;
}

std::string dims(Sort s) { return std::to_string(exponent_bits(s)) + " " + std::to_string(precision(s)); }

std::string sort_text(Sort s) {
  switch (s) {
    case Sort::Float32: return "Float32";
    case Sort::Float64: return "Float64";
    case Sort::Bool: return "Bool";
    case Sort::Int: return "Int";
    case Sort::RoundingMode: return "RoundingMode";
  }
  return "?";
}

// Field value of a #b / #x atom, with its bit width.
std::pair<std::uint64_t, unsigned> bit_field(const std::string& atom) {
  if (atom.size() < 3 || atom[0] != '#') throw LiteralError("expected a #b or #x field, found '" + atom + "'");
  const std::string digits = atom.substr(2);
  std::uint64_t v = 0;
  unsigned width = 0;
  if (atom[1] == 'b') {
    if (digits.size() > 64) throw LiteralError("bit field too wide");
    for (char c : digits) {
      if (c != '0' && c != '1') throw LiteralError("bad binary digit in '" + atom + "'");
      v = v << 1 | static_cast<unsigned>(c - '0');
    }
    width = static_cast<unsigned>(digits.size());
  } else if (atom[1] == 'x') {
    if (digits.size() > 16) throw LiteralError("bit field too wide");
    for (char c : digits) {
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else throw LiteralError("bad hex digit in '" + atom + "'");
      v = v << 4 | static_cast<unsigned>(d);
    }
    width = static_cast<unsigned>(digits.size() * 4);
  } else {
    throw LiteralError("expected a #b or #x field, found '" + atom + "'");
  }
  return {v, width};
}

std::optional<Sort> format_of(const std::string& eb, const std::string& sb) {
  if (eb == "8" && sb == "24") return Sort::Float32;
  if (eb == "11" && sb == "53") return Sort::Float64;
  return std::nullopt;
}

class Printer {
 public:
  explicit Printer(const EmitOptions& o) : o_(o) {}

  std::string operator()(const Term& x) {
    std::string s;
    print(x, s);
    return s;
  }

  const std::set<std::string>& uninterpreted() const { return uf_; }

  /// From now on, print `x` as a reference to `name`.
  void share(const Term& x, std::string name) { names_.emplace(x, std::move(name)); }

  /// Prints the definition body of a shared term (not its own name).
  std::string body(const Term& x) {
    std::string s;
    print_node(x, s);
    return s;
  }

 private:
  void list(std::string& s, std::string_view head, std::span<const Term> args, bool rounding = false) {
    s += '(';
    s += head;
    if (rounding) s += " RNE";
    for (const auto& a : args) {
      s += ' ';
      print(a, s);
    }
    s += ')';
  }

  // Uninterpreted arithmetic for the non-strict fallback.
  void uf_arith(std::string& s, const Term& x, const char* op) {
    const std::string name = std::string(op) + (x.sort() == Sort::Float32 ? "Float" : "Double");
    uf_.insert(name + " " + std::to_string(x.args().size()) + " " + sort_text(x.sort()));
    list(s, name, x.args());
  }

  void print(const Term& x, std::string& s) {
    // Inside a quantifier a user variable may share the bound name, so
    // never substitute definitions there.
    if (bound_.empty())
      if (auto it = names_.find(x); it != names_.end()) {
        s += it->second;
        return;
      }
    print_node(x, s);
  }

  void print_node(const Term& x, std::string& s) {
    switch (x.op()) {
      case Op::FpConst: s += format_fp_literal(x.literal()); return;
      case Op::BoolConst: s += x.bool_value() ? "true" : "false"; return;
      case Op::IntConst:
        if (x.int_value() < 0) s += "(- " + std::to_string(-x.int_value()) + ")";
        else s += std::to_string(x.int_value());
        return;
      case Op::Var:
        if (bound_.contains(x.name())) s += x.name();
        else s += smt_symbol(x.name());
        return;
      case Op::FpAdd: return o_.nonStrict ? uf_arith(s, x, "add") : list(s, "fp.add", x.args(), true);
      case Op::FpSub: return o_.nonStrict ? uf_arith(s, x, "sub") : list(s, "fp.sub", x.args(), true);
      case Op::FpMul: return o_.nonStrict ? uf_arith(s, x, "mul") : list(s, "fp.mul", x.args(), true);
      case Op::FpDiv: return o_.nonStrict ? uf_arith(s, x, "div") : list(s, "fp.div", x.args(), true);
      case Op::FpSqrt: return list(s, "fp.sqrt", x.args(), true);
      case Op::FpNeg: return list(s, "fp.neg", x.args());
      case Op::FpAbs: return list(s, "fp.abs", x.args());
      case Op::FpLeq: return list(s, "fp.leq", x.args());
      case Op::FpLt: return list(s, "fp.lt", x.args());
      case Op::FpGeq: return list(s, "fp.geq", x.args());
      case Op::FpGt: return list(s, "fp.gt", x.args());
      case Op::FpEq: return list(s, "fp.eq", x.args());
      case Op::IsNaN: return list(s, "fp.isNaN", x.args());
      case Op::IsInfinite: return list(s, "fp.isInfinite", x.args());
      case Op::IsNormal: return list(s, "fp.isNormal", x.args());
      case Op::IsSubnormal: return list(s, "fp.isSubnormal", x.args());
      case Op::IsZero: return list(s, "fp.isZero", x.args());
      case Op::IsNegative: return list(s, "fp.isNegative", x.args());
      case Op::IsPositive: return list(s, "fp.isPositive", x.args());
      case Op::Eq: return list(s, "=", x.args());
      case Op::Ite: return list(s, "ite", x.args());
      case Op::Not: return list(s, "not", x.args());
      case Op::And: return list(s, "and", x.args());
      case Op::Or: return list(s, "or", x.args());
      case Op::Implies: return list(s, "=>", x.args());
      case Op::Iff: return list(s, "=", x.args());
      case Op::Forall: {
        s += "(forall (";
        std::vector<std::string> added;
        for (std::size_t i = 0; i < x.bound().size(); ++i) {
          const Term& v = x.bound()[i];
          if (i) s += ' ';
          s += "(" + v.name() + " " + sort_text(v.sort()) + ")";
          if (bound_.insert(v.name()).second) added.push_back(v.name());
        }
        s += ") ";
        print(x.arg(0), s);
        s += ')';
        for (const auto& n : added) bound_.erase(n);
        return;
      }
      case Op::Apply:
        if (x.fn() == Fn::Sqrt && o_.sqrtMode == SqrtMode::Builtin) return list(s, "fp.sqrt", x.args(), true);
        return list(s, fn_smt_name(x.fn()), x.args());
      case Op::IntAdd: return list(s, "+", x.args());
      case Op::IntSub: return list(s, "-", x.args());
      case Op::IntMul: return list(s, "*", x.args());
      case Op::IntLeq: return list(s, "<=", x.args());
      case Op::IntLt: return list(s, "<", x.args());
      case Op::IntGeq: return list(s, ">=", x.args());
      case Op::IntGt: return list(s, ">", x.args());
    }
    throw std::logic_error("emit_smt: unsupported term node");
  }

  const EmitOptions& o_;
  std::set<std::string> bound_;
  std::set<std::string> uf_;
  std::map<Term, std::string> names_;
};

// Compound, quantifier-free, non-boolean subterms reachable more than once, children
// before parents, in first-visit order.
std::vector<Term> shared_subterms(const std::vector<Term>& roots) {
  std::map<Term, int> refs;
  std::vector<Term> post;
  auto visit = [&](auto&& self, const Term& x) -> void {
    if (++refs[x] > 1) return;
    if (x.op() == Op::Forall) return;
    for (const auto& a : x.args()) self(self, a);
    post.push_back(x);
  };
  for (const auto& r : roots) visit(visit, r);
  std::vector<Term> out;
  for (const auto& x : post)
    if (refs[x] > 1 && !x.args().empty() && x.sort() != Sort::Bool && !contains_quantifier(x)) out.push_back(x);
  return out;
}

bool selected(const AxiomSchema& s, const EmitOptions& o) {
  return o.axiomFilter.empty() || std::find(o.axiomFilter.begin(), o.axiomFilter.end(), s.id) != o.axiomFilter.end();
}

// Goal-irrelevant quantified axioms standing in for a heap model. The
// injective, never-null successor function forces an infinite domain for
// Object, so no finite model exists for a solver to report.
const char* const kBackground =
    "; synthetic background theory (quantified, unrelated to the goal)\n"
    "(declare-sort Object 0)\n"
    "(declare-fun null () Object)\n"
    "(declare-fun next (Object) Object)\n"
    "(declare-fun created (Object) Bool)\n"
    "(declare-fun fieldValue (Object) Float64)\n"
    "(assert (created null))\n"
    "(assert (forall ((o Object)) (not (= (next o) null))))\n"
    "(assert (forall ((o Object) (p Object)) (=> (= (next o) (next p)) (= o p))))\n"
    "(assert (forall ((o Object)) (=> (created o) (created (next o)))))\n"
    "(assert (forall ((o Object)) (=> (created o) (not (fp.isNaN (fieldValue o))))))\n";

}  // namespace

std::string smt_symbol(std::string_view name) { return "|" + std::string(name) + "|"; }

std::string format_fp_literal(const FpLiteral& lit) {
  const Sort f = lit.format;
  if (lit.is_nan()) return "(_ NaN " + dims(f) + ")";
  if (lit.is_infinite()) return std::string("(_ ") + (lit.sign ? "-oo " : "+oo ") + dims(f) + ")";
  return "(fp #b" + std::string(lit.sign ? "1" : "0") + " #b" + bits(lit.exponent, exponent_bits(f)) + " #b" +
         bits(lit.significand, significand_bits(f)) + ")";
}

std::optional<FpLiteral> fp_literal_from_sexpr(const Sexpr& e) {
  if (!e.is_list) return std::nullopt;
  if (e.items.size() == 4 && e.items[0].is_atom("fp")) {
    const auto [sv, sw] = bit_field(e.items[1].atom);
    const auto [ev, ew] = bit_field(e.items[2].atom);
    const auto [mv, mw] = bit_field(e.items[3].atom);
    if (sw != 1) throw LiteralError("sign field must be one bit");
    Sort f;
    if (ew == 8 && mw == 23) f = Sort::Float32;
    else if (ew == 11 && mw == 52) f = Sort::Float64;
    else throw LiteralError("unsupported float format in " + e.str());
    return FpLiteral::from_fields(f, sv != 0, ev, mv);
  }
  if (e.items.size() == 4 && e.items[0].is_atom("_")) {
    const auto f = format_of(e.items[2].atom, e.items[3].atom);
    if (!f) return std::nullopt;
    const std::string& k = e.items[1].atom;
    if (k == "NaN") return FpLiteral::nan(*f);
    if (k == "+oo") return FpLiteral::infinity(*f, false);
    if (k == "-oo") return FpLiteral::infinity(*f, true);
    if (k == "+zero") return FpLiteral::zero(*f, false);
    if (k == "-zero") return FpLiteral::zero(*f, true);
  }
  return std::nullopt;
}

FpLiteral parse_fp_literal(std::string_view text) {
  std::vector<Sexpr> es;
  try {
    es = parse_sexprs(text);
  } catch (const SexprError& e) {
    throw LiteralError(e.what());
  }
  if (es.size() != 1) throw LiteralError("expected one float constant");
  auto v = fp_literal_from_sexpr(es[0]);
  if (!v) throw LiteralError("not a float constant: " + std::string(text));
  return *v;
}

SmtDocument emit_smt(const ProofObligation& po, const EmitOptions& opts) {
  SmtDocument doc;
  doc.goalName = po.name;
  Printer print(opts);

  // Which library functions remain uninterpreted symbols in this document.
  std::set<Fn> functions;
  for (const auto& occ : po.occurrences)
    if (!(occ.fn == Fn::Sqrt && opts.sqrtMode == SqrtMode::Builtin)) functions.insert(occ.fn);

  std::vector<AxiomSchema> schemas;
  for (Fn f : functions)
    for (auto& s : axiom_pack(f))
      if (selected(s, opts)) schemas.push_back(std::move(s));

  std::vector<Term> axioms;
  if (opts.transMode == TransMode::SmtAxioms) {
    axioms = quantified_axioms(schemas);
  } else {
    std::vector<Occurrence> occs;
    for (const auto& occ : po.occurrences)
      if (functions.contains(occ.fn)) occs.push_back(occ);
    // A filter may drop every schema of a function; that is not an error here.
    std::vector<Occurrence> covered;
    for (const auto& occ : occs)
      if (std::any_of(schemas.begin(), schemas.end(), [&](const AxiomSchema& s) { return s.symbol == occ.fn; })) covered.push_back(occ);
    axioms = ground_instances(schemas, covered);
  }

  // Name repeated subterms once instead of printing them at every use.
  std::vector<Term> roots = opts.transMode == TransMode::GroundInst ? axioms : std::vector<Term>{};
  roots.insert(roots.end(), po.hypotheses.begin(), po.hypotheses.end());
  roots.push_back(po.goal);
  std::vector<std::string> defs;
  int next_def = 0;
  for (const auto& x : shared_subterms(roots)) {
    const std::string name = "|$t" + std::to_string(++next_def) + "|";
    defs.push_back("(define-fun " + name + " () " + sort_text(x.sort()) + " " + print.body(x) + ")");
    print.share(x, name);
  }

  std::vector<std::string> axiom_text, hyp_text;
  for (const auto& a : axioms) axiom_text.push_back(print(a));
  for (const auto& h : po.hypotheses) hyp_text.push_back(print(h));
  const std::string goal_text = print(po.goal);

  std::set<std::pair<std::string, Sort>> symbols;
  std::vector<Term> all = po.hypotheses;
  all.push_back(po.goal);
  bool uses_int = false;
  for (const auto& x : all) {
    for (const auto& v : free_vars(x)) symbols.insert({v.name(), v.sort()});
    uses_int = uses_int || contains_sort(x, Sort::Int);
  }

  doc.hasQuantifiers = opts.backgroundQuantifiers || (opts.transMode == TransMode::SmtAxioms && !axioms.empty());
  for (const auto& x : all) doc.hasQuantifiers = doc.hasQuantifiers || contains_quantifier(x);
  const bool uses_uf = !functions.empty() || !print.uninterpreted().empty() || opts.backgroundQuantifiers;
  doc.logic = !opts.logic.empty() ? opts.logic : (doc.hasQuantifiers || uses_uf || uses_int) ? "ALL" : "QF_FP";

  std::ostringstream os;
  os << "; obligation " << po.name << "\n";
  os << "; " << po.provenance.method << " contract " << po.provenance.contract << ": " << po.provenance.path << "\n";
  os << "; trans-mode " << trans_mode_name(opts.transMode) << ", sqrt-mode " << sqrt_mode_name(opts.sqrtMode)
     << ", background quantifiers " << (opts.backgroundQuantifiers ? "on" : "off") << "\n";
  if (opts.produceModel) os << "(set-option :produce-models true)\n";
  os << "(set-logic " << doc.logic << ")\n";
  for (const auto& [name, sort] : symbols) {
    os << "(declare-fun " << smt_symbol(name) << " () " << sort_text(sort) << ")\n";
    doc.declaredSymbols.push_back(name);
  }
  for (Fn f : functions) os << "(declare-fun " << fn_smt_name(f) << " (Float64) Float64)\n";
  for (const auto& u : print.uninterpreted()) {
    std::istringstream is(u);
    std::string name, sort;
    int arity = 0;
    is >> name >> arity >> sort;
    os << "(declare-fun " << name << " (";
    for (int i = 0; i < arity; ++i) os << (i ? " " : "") << sort;
    os << ") " << sort << ")\n";
  }
  if (opts.backgroundQuantifiers) os << kBackground;
  for (const auto& d : defs) os << d << "\n";
  if (!axiom_text.empty()) {
    os << "; axioms (" << trans_mode_name(opts.transMode) << ")\n";
    for (const auto& a : axiom_text) os << "(assert " << a << ")\n";
  }
  if (!hyp_text.empty()) {
    os << "; hypotheses\n";
    for (const auto& h : hyp_text) os << "(assert " << h << ")\n";
  }
  os << "; negated goal\n";
  os << "(assert (not " << goal_text << "))\n";
  os << "(check-sat)\n";
  if (opts.produceModel) os << "(get-model)\n";
  doc.text = os.str();
  return doc;
}

}  // namespace floatdv
