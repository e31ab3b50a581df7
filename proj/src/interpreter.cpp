#include "floatdv/interpreter.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>

#include "floatdv/typecheck.hpp"
#include "floatdv/vcgen.hpp"

namespace floatdv {

using namespace minif;

namespace {

constexpr long kMaxLoopIterations = 10'000'000;
constexpr int kMaxCallDepth = 1000;

const FpLiteral& fp_of(const Value& v) {
  if (auto p = std::get_if<FpLiteral>(&v)) return *p;
  throw InterpError("expected a float value");
}
bool bool_of(const Value& v) {
  if (auto p = std::get_if<bool>(&v)) return *p;
  throw InterpError("expected a boolean value");
}
std::int64_t int_of(const Value& v) {
  if (auto p = std::get_if<std::int64_t>(&v)) return *p;
  throw InterpError("expected an integer value");
}

std::vector<Sort> slot_sorts(const Program& p, const Type& t) {
  switch (t.kind) {
    case Type::Kind::Record: {
      std::vector<Sort> out;
      for (const auto& f : p.find_record(t.record)->fields) out.push_back(f.type.sort());
      return out;
    }
    case Type::Kind::Array: return std::vector<Sort>(static_cast<std::size_t>(t.length), Sort::Float64);
    default: return {t.sort()};
  }
}

Value zero_value(Sort s) {
  switch (s) {
    case Sort::Bool: return false;
    case Sort::Int: return std::int64_t{0};
    default: return FpLiteral::zero(s, false);
  }
}

ConcreteValue default_value(const Program& p, const Type& t) {
  ConcreteValue v{t, {}};
  for (Sort s : slot_sorts(p, t)) v.parts.push_back(zero_value(s));
  return v;
}

ConcreteValue scalar(const Type& t, Value v) { return {t, {std::move(v)}}; }

template <class F>
std::int64_t checked(F op, std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (op(a, b, &r)) throw InterpError("integer overflow");
  return r;
}
const auto add_ovf = [](std::int64_t a, std::int64_t b, std::int64_t* r) { return __builtin_add_overflow(a, b, r); };
const auto sub_ovf = [](std::int64_t a, std::int64_t b, std::int64_t* r) { return __builtin_sub_overflow(a, b, r); };
const auto mul_ovf = [](std::int64_t a, std::int64_t b, std::int64_t* r) { return __builtin_mul_overflow(a, b, r); };

using Frame = std::map<std::string, ConcreteValue>;

class Machine {
 public:
  Machine(const TypedProgram& p, const FnInterpretation& fns, std::vector<std::string>* trace)
      : p_(p.program), fns_(fns), trace_(trace) {}

  ConcreteValue call(const MethodDecl& m, std::vector<ConcreteValue> args) {
    if (++depth_ > kMaxCallDepth) throw InterpError("call depth limit exceeded in '" + m.name + "'");
    Frame frame;
    for (std::size_t i = 0; i < m.params.size(); ++i) frame[m.params[i].name] = std::move(args[i]);
    std::optional<ConcreteValue> r = block(m.body, frame);
    --depth_;
    if (!r) throw InterpError("method '" + m.name + "' ended without returning");
    return *r;
  }

  ConcreteValue eval(const Expr& e, const Frame& f, const ConcreteValue* result = nullptr) {
    const Type ty = e.type.value_or(Type::boolean());
    switch (e.kind) {
      case ExprKind::FloatLit: return scalar(ty, encode_decimal(e.text, e.single ? Sort::Float32 : Sort::Float64));
      case ExprKind::IntLit: return scalar(ty, e.ival);
      case ExprKind::BoolLit: return scalar(ty, e.ival != 0);
      case ExprKind::Var: {
        if (auto it = f.find(e.name); it != f.end()) return it->second;
        if (const ConstDecl* c = p_.find_constant(e.name)) return eval(c->value, {});
        throw InterpError("unbound variable '" + e.name + "'");
      }
      case ExprKind::Result:
        if (!result) throw InterpError("\\result used outside a postcondition");
        return *result;
      case ExprKind::Field: {
        const ConcreteValue base = eval(e.args[0], f, result);
        const int idx = p_.find_record(base.type.record)->field_index(e.name);
        return scalar(ty, base.parts[static_cast<std::size_t>(idx)]);
      }
      case ExprKind::Index: {
        const ConcreteValue base = eval(e.args[0], f, result);
        const std::int64_t i = int_of(eval(e.args[1], f, result).scalar());
        if (i < 0 || i >= static_cast<std::int64_t>(base.parts.size()))
          throw InterpError("array index " + std::to_string(i) + " out of bounds at line " + std::to_string(e.pos.line));
        return scalar(ty, base.parts[static_cast<std::size_t>(i)]);
      }
      case ExprKind::Length: return scalar(ty, std::int64_t{e.args[0].type->length});
      case ExprKind::Unary: {
        const Value a = eval(e.args[0], f, result).scalar();
        if (e.unop == UnOp::Not) return scalar(ty, !bool_of(a));
        if (auto i = std::get_if<std::int64_t>(&a)) return scalar(ty, checked(sub_ovf, 0, *i));
        return scalar(ty, fp_of(a).negated());
      }
      case ExprKind::Binary: return scalar(ty, binary(e, f, result));
      case ExprKind::Call: {
        std::vector<ConcreteValue> args;
        for (const auto& a : e.args) args.push_back(eval(a, f, result));
        if (auto pred = spec_predicate_from_name(e.name)) {
          std::vector<Term> ts;
          for (const auto& a : args) ts.push_back(term::fp(fp_of(a.scalar())));
          return scalar(ty, evaluate_bool(build_spec_predicate(*pred, ts), {}));
        }
        if (e.name == "abs") return scalar(ty, fparith::abs(fp_of(args[0].scalar())));
        if (auto fn = fn_from_name(e.name)) {
          auto r = fns_(*fn, fp_of(args[0].scalar()));
          if (!r) throw InterpError("no interpretation for " + e.name);
          return scalar(ty, *r);
        }
        const MethodDecl* callee = p_.find_method(e.name);
        if (!callee) throw InterpError("unknown method '" + e.name + "'");
        return call(*callee, std::move(args));
      }
      case ExprKind::Forall: throw InterpError("quantifier at line " + std::to_string(e.pos.line) + " was not unrolled");
      case ExprKind::NewRecord:
      case ExprKind::NewArray: {
        ConcreteValue v{ty, {}};
        for (const auto& a : e.args) v.parts.push_back(eval(a, f, result).scalar());
        return v;
      }
    }
    throw InterpError("unhandled expression");
  }

 private:
  Value binary(const Expr& e, const Frame& f, const ConcreteValue* result) {
    const Value a = eval(e.args[0], f, result).scalar();
    // Connectives short-circuit like the source language would.
    switch (e.binop) {
      case BinOp::And: return bool_of(a) && bool_of(eval(e.args[1], f, result).scalar());
      case BinOp::Or: return bool_of(a) || bool_of(eval(e.args[1], f, result).scalar());
      case BinOp::Implies: return !bool_of(a) || bool_of(eval(e.args[1], f, result).scalar());
      default: break;
    }
    const Value b = eval(e.args[1], f, result).scalar();
    if (auto x = std::get_if<std::int64_t>(&a)) {
      const std::int64_t y = int_of(b);
      switch (e.binop) {
        case BinOp::Add: return checked(add_ovf, *x, y);
        case BinOp::Sub: return checked(sub_ovf, *x, y);
        case BinOp::Mul: return checked(mul_ovf, *x, y);
        case BinOp::Lt: return *x < y;
        case BinOp::Le: return *x <= y;
        case BinOp::Gt: return *x > y;
        case BinOp::Ge: return *x >= y;
        case BinOp::Eq: return *x == y;
        case BinOp::Ne: return *x != y;
        default: throw InterpError("bad integer operator");
      }
    }
    if (auto x = std::get_if<bool>(&a)) {
      const bool y = bool_of(b);
      switch (e.binop) {
        case BinOp::Eq:
        case BinOp::Iff: return *x == y;
        case BinOp::Ne: return *x != y;
        default: throw InterpError("bad boolean operator");
      }
    }
    const FpLiteral& x = fp_of(a);
    const FpLiteral& y = fp_of(b);
    switch (e.binop) {
      case BinOp::Add: return fparith::add(x, y);
      case BinOp::Sub: return fparith::sub(x, y);
      case BinOp::Mul: return fparith::mul(x, y);
      case BinOp::Div: return fparith::div(x, y);
      case BinOp::Lt: return fparith::lt(x, y);
      case BinOp::Le: return fparith::leq(x, y);
      case BinOp::Gt: return fparith::lt(y, x);
      case BinOp::Ge: return fparith::leq(y, x);
      case BinOp::Eq: return fparith::ieee_eq(x, y);
      case BinOp::Ne: return !fparith::ieee_eq(x, y);
      default: throw InterpError("bad float operator");
    }
  }

  void note(const SourcePos& pos, const std::string& what) {
    if (trace_ && depth_ == 1) trace_->push_back("line " + std::to_string(pos.line) + ": " + what);
  }

  // Runs statements in a nested scope; returns the value of a `return`.
  std::optional<ConcreteValue> block(const std::vector<Stmt>& body, Frame& f) {
    std::vector<std::string> declared;
    std::optional<ConcreteValue> r;
    for (const auto& s : body) {
      if (s.kind == StmtKind::Decl) declared.push_back(s.name);
      r = stmt(s, f);
      if (r) break;
    }
    for (const auto& d : declared) f.erase(d);
    return r;
  }

  std::optional<ConcreteValue> stmt(const Stmt& s, Frame& f) {
    switch (s.kind) {
      case StmtKind::Decl: {
        ConcreteValue v = s.expr ? eval(*s.expr, f) : default_value(p_, s.decl_type);
        note(s.pos, s.name + " = " + format_value(v, p_));
        f[s.name] = std::move(v);
        return std::nullopt;
      }
      case StmtKind::Assign: {
        ConcreteValue v = eval(*s.expr, f);
        const Expr& t = *s.target;
        if (t.kind == ExprKind::Var) {
          note(s.pos, t.name + " = " + format_value(v, p_));
          f[t.name] = std::move(v);
          return std::nullopt;
        }
        const std::string& base = t.args[0].name;
        ConcreteValue& whole = f.at(base);
        std::size_t idx;
        std::string label;
        if (t.kind == ExprKind::Field) {
          idx = static_cast<std::size_t>(p_.find_record(whole.type.record)->field_index(t.name));
          label = base + "." + t.name;
        } else {
          const std::int64_t i = int_of(eval(t.args[1], f).scalar());
          if (i < 0 || i >= static_cast<std::int64_t>(whole.parts.size()))
            throw InterpError("array index out of bounds at line " + std::to_string(s.pos.line));
          idx = static_cast<std::size_t>(i);
          label = base + "[" + std::to_string(i) + "]";
        }
        whole.parts[idx] = v.scalar();
        note(s.pos, label + " = " + format_value(v.scalar()));
        return std::nullopt;
      }
      case StmtKind::Block: return block(s.body, f);
      case StmtKind::If: {
        const bool c = bool_of(eval(*s.expr, f).scalar());
        note(s.pos, c ? "condition true" : "condition false");
        return block(c ? s.body : s.else_body, f);
      }
      case StmtKind::While: {
        for (long k = 0;; ++k) {
          if (k >= kMaxLoopIterations) throw InterpError("loop at line " + std::to_string(s.pos.line) + " exceeded the iteration limit");
          if (!bool_of(eval(*s.expr, f).scalar())) {
            note(s.pos, "loop exits after " + std::to_string(k) + " iteration(s)");
            return std::nullopt;
          }
          if (auto r = block(s.body, f)) return r;
        }
      }
      case StmtKind::Return: {
        ConcreteValue v = eval(*s.expr, f);
        note(s.pos, "return " + format_value(v, p_));
        return v;
      }
    }
    return std::nullopt;
  }

  const Program& p_;
  const FnInterpretation& fns_;
  std::vector<std::string>* trace_;
  int depth_ = 0;
};

TypedProgram prepared(const TypedProgram& p) {
  return has_spec_quantifiers(p.program) ? unroll_spec_quantifiers(p) : p;
}

const MethodDecl& method_in(const TypedProgram& p, const MethodDecl& m) {
  const MethodDecl* found = p.program.find_method(m.name);
  if (!found) throw InterpError("unknown method '" + m.name + "'");
  return *found;
}

const Contract& contract_of(const MethodDecl& m, int contract) {
  if (contract < 0 || contract >= static_cast<int>(m.contracts.size()))
    throw InterpError("method '" + m.name + "' has no contract " + std::to_string(contract + 1));
  return m.contracts[static_cast<std::size_t>(contract)];
}

ContractCheck check_prepared(const TypedProgram& p, const MethodDecl& m, const Contract& c, const Inputs& inputs,
                             const FnInterpretation& fns) {
  Machine vm(p, fns, nullptr);
  ContractCheck out;
  out.pre = !c.requires_ || bool_of(vm.eval(*c.requires_, inputs).scalar());
  if (!out.pre) return out;
  std::vector<ConcreteValue> args;
  for (const auto& prm : m.params) args.push_back(inputs.at(prm.name));
  out.result = vm.call(m, std::move(args));
  out.post = !c.ensures || bool_of(vm.eval(*c.ensures, inputs, &*out.result).scalar());
  return out;
}

// Order-preserving map from doubles to integers, so that integer intervals
// correspond to intervals of representable values.
std::int64_t ordered(double d) {
  const auto b = std::bit_cast<std::int64_t>(d);
  return b < 0 ? std::numeric_limits<std::int64_t>::min() - b : b;
}
double unordered(std::int64_t k) {
  return std::bit_cast<double>(k < 0 ? std::numeric_limits<std::int64_t>::min() - k : k);
}

struct Bounds {
  double lo = -std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::max();
  bool has_lo = false, has_hi = false;
  bool no_specials = false;
};

// Slot name of an input access (`x`, `r.f`, `a[2]`), if the expression is one.
std::optional<std::string> slot_name(const Expr& e, const MethodDecl& m) {
  auto is_param = [&](const std::string& n) {
    for (const auto& prm : m.params) if (prm.name == n) return true;
    return false;
  };
  if (e.kind == ExprKind::Var && is_param(e.name)) return e.name;
  if (e.kind == ExprKind::Field && e.args[0].kind == ExprKind::Var && is_param(e.args[0].name))
    return e.args[0].name + "." + e.name;
  if (e.kind == ExprKind::Index && e.args[0].kind == ExprKind::Var && is_param(e.args[0].name))
    if (auto i = fold_int(e.args[1])) return e.args[0].name + "[" + std::to_string(*i) + "]";
  return std::nullopt;
}

std::optional<double> literal_value(const Expr& e, const Program& p) {
  if (e.kind == ExprKind::FloatLit) {
    const FpLiteral l = encode_decimal(e.text, e.single ? Sort::Float32 : Sort::Float64);
    return l.format == Sort::Float32 ? static_cast<double>(l.to_float()) : l.to_double();
  }
  if (e.kind == ExprKind::IntLit) return static_cast<double>(e.ival);
  if (e.kind == ExprKind::Unary && e.unop == UnOp::Neg)
    if (auto v = literal_value(e.args[0], p)) return -*v;
  if (e.kind == ExprKind::Var)
    if (const ConstDecl* c = p.find_constant(e.name)) return literal_value(c->value, p);
  return std::nullopt;
}

void collect_bounds(const Expr& e, const MethodDecl& m, const Program& p, std::map<std::string, Bounds>& out) {
  if (e.kind == ExprKind::Binary && e.binop == BinOp::And) {
    collect_bounds(e.args[0], m, p, out);
    collect_bounds(e.args[1], m, p, out);
    return;
  }
  if (e.kind == ExprKind::Call && (e.name == "fp_nice" || e.name == "fp_normal") && e.args.size() == 1) {
    if (auto s = slot_name(e.args[0], m)) out[*s].no_specials = true;
    return;
  }
  if (e.kind != ExprKind::Binary) return;
  BinOp op = e.binop;
  if (op != BinOp::Lt && op != BinOp::Le && op != BinOp::Gt && op != BinOp::Ge && op != BinOp::Eq) return;
  auto slot = slot_name(e.args[0], m);
  auto val = literal_value(e.args[1], p);
  if (!slot || !val) {
    slot = slot_name(e.args[1], m);
    val = literal_value(e.args[0], p);
    if (!slot || !val) return;
    if (op == BinOp::Lt) op = BinOp::Gt;
    else if (op == BinOp::Le) op = BinOp::Ge;
    else if (op == BinOp::Gt) op = BinOp::Lt;
    else if (op == BinOp::Ge) op = BinOp::Le;
  }
  if (std::isnan(*val)) return;
  Bounds& b = out[*slot];
  const double v = std::clamp(*val, -std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
  if (op == BinOp::Gt || op == BinOp::Ge || op == BinOp::Eq) {
    if (!b.has_lo || v > b.lo) b.lo = v;
    b.has_lo = true;
  }
  if (op == BinOp::Lt || op == BinOp::Le || op == BinOp::Eq) {
    if (!b.has_hi || v < b.hi) b.hi = v;
    b.has_hi = true;
  }
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : rng_() % n; }

  FpLiteral fp(Sort s, const Bounds& b) {
    if (!b.no_specials && chance(0.05)) {
      static const double specials[] = {std::numeric_limits<double>::quiet_NaN(),
                                        std::numeric_limits<double>::infinity(),
                                        -std::numeric_limits<double>::infinity(),
                                        0.0,
                                        -0.0,
                                        std::numeric_limits<double>::denorm_min(),
                                        -std::numeric_limits<double>::denorm_min(),
                                        std::numeric_limits<double>::max(),
                                        -std::numeric_limits<double>::max()};
      return convert(s, specials[below(std::size(specials))]);
    }
    double lo = b.lo, hi = b.hi;
    if (s == Sort::Float32) {
      lo = std::max(lo, -static_cast<double>(std::numeric_limits<float>::max()));
      hi = std::min(hi, static_cast<double>(std::numeric_limits<float>::max()));
    }
    if (lo > hi) std::swap(lo, hi);
    const double width = hi - lo;
    if (b.has_lo && b.has_hi && std::isfinite(width) && chance(0.5)) return convert(s, std::clamp(lo + width * unit(), lo, hi));
    const std::int64_t a = ordered(lo), z = ordered(hi);
    const auto span = static_cast<std::uint64_t>(z) - static_cast<std::uint64_t>(a);
    const std::uint64_t off = span == std::numeric_limits<std::uint64_t>::max() ? rng_() : below(span + 1);
    return convert(s, unordered(static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + off)));
  }

  std::int64_t integer(const Bounds& b) {
    const auto lo = static_cast<std::int64_t>(b.has_lo ? std::max(b.lo, -1e6) : -100.0);
    const auto hi = static_cast<std::int64_t>(b.has_hi ? std::min(b.hi, 1e6) : 100.0);
    if (hi < lo) return lo;
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

 private:
  static FpLiteral convert(Sort s, double d) {
    return s == Sort::Float32 ? FpLiteral::from_float(static_cast<float>(d)) : FpLiteral::from_double(d);
  }
  std::mt19937_64 rng_;
};

}  // namespace

std::string format_value(const Value& v) {
  if (auto b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (auto i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  const FpLiteral& l = std::get<FpLiteral>(v);
  char hex[32];
  if (l.format == Sort::Float32)
    std::snprintf(hex, sizeof hex, "0x%08llx", static_cast<unsigned long long>(l.bits()));
  else
    std::snprintf(hex, sizeof hex, "0x%016llx", static_cast<unsigned long long>(l.bits()));
  return to_decimal_string(l) + " [" + hex + "]";
}

std::string format_value(const ConcreteValue& v, const Program& p) {
  if (v.type.kind == Type::Kind::Record) {
    const RecordDecl* r = p.find_record(v.type.record);
    std::string s = v.type.record + "{";
    for (std::size_t i = 0; i < v.parts.size(); ++i) {
      if (i) s += ", ";
      s += r->fields[i].name + "=" + format_value(v.parts[i]);
    }
    return s + "}";
  }
  if (v.type.kind == Type::Kind::Array) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.parts.size(); ++i) {
      if (i) s += ", ";
      s += format_value(v.parts[i]);
    }
    return s + "]";
  }
  return format_value(v.scalar());
}

ExecResult eval_method(const TypedProgram& p, const MethodDecl& m, const Inputs& inputs, bool trace,
                       const FnInterpretation& fns) {
  ExecResult out;
  Machine vm(p, fns, trace ? &out.trace : nullptr);
  std::vector<ConcreteValue> args;
  for (const auto& prm : m.params) {
    auto it = inputs.find(prm.name);
    if (it == inputs.end()) throw InterpError("missing input '" + prm.name + "'");
    args.push_back(it->second);
  }
  out.result = vm.call(m, std::move(args));
  return out;
}

ContractCheck check_contract(const TypedProgram& p, const MethodDecl& m, int contract, const Inputs& inputs,
                             const FnInterpretation& fns) {
  const TypedProgram q = prepared(p);
  const MethodDecl& mm = method_in(q, m);
  return check_prepared(q, mm, contract_of(mm, contract), inputs, fns);
}

std::vector<Inputs> random_inputs(const TypedProgram& p, const MethodDecl& m, int contract, int n, std::uint64_t seed) {
  const TypedProgram q = prepared(p);
  const MethodDecl& mm = method_in(q, m);
  const Contract& c = contract_of(mm, contract);
  std::map<std::string, Bounds> bounds;
  if (c.requires_) collect_bounds(*c.requires_, mm, q.program, bounds);

  const auto symbols = input_symbols(q, mm);
  Sampler rng(seed);
  Machine vm(q, host_library, nullptr);
  std::vector<Inputs> out;
  const long limit = 1000L * std::max(n, 1);
  long rejected = 0;
  while (static_cast<int>(out.size()) < n) {
    Assignment a;
    for (const auto& [name, sort] : symbols) {
      const Bounds b = bounds.contains(name) ? bounds.at(name) : Bounds{};
      if (sort == Sort::Bool) a[name] = rng.chance(0.5);
      else if (sort == Sort::Int) a[name] = rng.integer(b);
      else a[name] = rng.fp(sort, b);
    }
    Inputs in = inputs_from_assignment(q, mm, a);
    bool ok = false;
    try {
      ok = !c.requires_ || bool_of(vm.eval(*c.requires_, in).scalar());
    } catch (const InterpError&) {
    }
    if (ok) {
      out.push_back(std::move(in));
    } else if (++rejected >= limit) {
      throw SamplingGiveUp("precondition of '" + m.name + "' rejected " + std::to_string(rejected) + " samples");
    }
  }
  return out;
}

std::optional<Counterexample> falsify(const TypedProgram& p, const MethodDecl& m, int contract, int trials,
                                      std::uint64_t seed) {
  const TypedProgram q = prepared(p);
  const MethodDecl& mm = method_in(q, m);
  const Contract& c = contract_of(mm, contract);
  const std::vector<Inputs> samples = random_inputs(q, mm, contract, trials, seed);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    ContractCheck r;
    try {
      r = check_prepared(q, mm, c, samples[i], host_library);
    } catch (const InterpError&) {
      continue;
    }
    if (r.pre && r.post && !*r.post) {
      Counterexample cx;
      cx.inputs = samples[i];
      cx.result = *r.result;
      cx.trace = eval_method(q, mm, samples[i], true).trace;
      cx.trial = static_cast<int>(i);
      return cx;
    }
  }
  return std::nullopt;
}

Inputs inputs_from_assignment(const TypedProgram& p, const MethodDecl& m, const Assignment& values,
                              std::vector<std::string>* missing) {
  Inputs out;
  for (const auto& prm : m.params) out[prm.name] = default_value(p.program, prm.type);
  for (const auto& [name, sort] : input_symbols(p, m)) {
    // Symbol names follow the parameter: `x`, `r.f` or `a[i]`.
    const std::size_t cut = name.find_first_of(".[");
    const std::string base = name.substr(0, cut);
    ConcreteValue& v = out.at(base);
    std::size_t idx = 0;
    if (cut != std::string::npos) {
      if (name[cut] == '.') idx = static_cast<std::size_t>(p.program.find_record(v.type.record)->field_index(name.substr(cut + 1)));
      else idx = std::stoul(name.substr(cut + 1));
    }
    auto it = values.find(name);
    if (it == values.end()) {
      if (missing) missing->push_back(name);
      continue;
    }
    Value val = it->second;
    if (auto l = std::get_if<FpLiteral>(&val); l && l->format != sort)
      throw InterpError("value for '" + name + "' has the wrong float format");
    v.parts[idx] = std::move(val);
  }
  return out;
}

std::string_view replay_status_name(ReplayStatus s) {
  switch (s) {
    case ReplayStatus::Confirmed: return "confirmed";
    case ReplayStatus::Spurious: return "spurious";
    case ReplayStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

bool uses_library_functions(const TypedProgram& p, const MethodDecl& m, bool count_sqrt) {
  std::vector<std::string> seen{m.name};
  std::vector<const MethodDecl*> todo{&m};
  bool found = false;
  while (!todo.empty() && !found) {
    const MethodDecl* cur = todo.back();
    todo.pop_back();
    for_each_expr(cur->body, [&](const Expr& e) {
      if (e.kind != ExprKind::Call) return;
      if (e.name == "sin" || e.name == "cos" || e.name == "atan" || (count_sqrt && e.name == "sqrt")) found = true;
      if (const MethodDecl* callee = p.program.find_method(e.name);
          callee && std::find(seen.begin(), seen.end(), e.name) == seen.end()) {
        seen.push_back(e.name);
        todo.push_back(callee);
      }
    });
  }
  return found;
}

ReplayResult replay(const TypedProgram& p, const MethodDecl& m, int contract, const Assignment& model,
                    bool sqrt_axiomatized, bool trace) {
  const TypedProgram q = prepared(p);
  const MethodDecl& mm = method_in(q, m);
  ReplayResult out;
  out.inputs = inputs_from_assignment(q, mm, model, &out.missing);
  try {
    out.check = check_prepared(q, mm, contract_of(mm, contract), out.inputs, host_library);
    if (trace && out.check.pre) out.trace = eval_method(q, mm, out.inputs, true).trace;
  } catch (const InterpError& e) {
    out.status = ReplayStatus::Inconclusive;
    out.detail = std::string("execution failed: ") + e.what();
    return out;
  }
  if (!out.check.pre) {
    out.status = ReplayStatus::Spurious;
    out.detail = "model violates the precondition";
  } else if (!*out.check.post) {
    out.status = ReplayStatus::Confirmed;
    out.detail = "postcondition fails on concrete execution";
  } else if (uses_library_functions(q, mm, sqrt_axiomatized)) {
    out.status = ReplayStatus::Inconclusive;
    out.detail = "postcondition holds with the host math library; the solver only knew the axioms";
  } else {
    out.status = ReplayStatus::Spurious;
    out.detail = "postcondition holds on concrete execution";
  }
  return out;
}

}  // namespace floatdv
