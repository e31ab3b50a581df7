#include "floatdv/vcgen.hpp"

#include <json.hpp>
#include <map>
#include <set>

#include "floatdv/typecheck.hpp"

namespace floatdv {

using namespace minif;
namespace t = term;

Term ProofObligation::formula() const { return t::implies(t::and_(hypotheses), goal); }

std::vector<Occurrence> collect_occurrences(const std::vector<Term>& terms) {
  std::vector<Occurrence> out;
  std::set<Term> seen;
  std::set<Term> visited;
  auto walk = [&](auto&& self, const Term& x) -> void {
    if (!visited.insert(x).second) return;
    if (x.op() == Op::Apply && seen.insert(x).second) out.push_back({x.fn(), x.arg(0)});
    for (const auto& a : x.args()) self(self, a);
  };
  for (const auto& x : terms) walk(walk, x);
  return out;
}

namespace {

// Symbolic value: one term per scalar slot (records: fields in order; arrays: elements).
struct SymValue {
  Type type;
  std::vector<Term> parts;
  const Term& scalar() const { return parts.front(); }
};

using Store = std::map<std::string, SymValue>;

struct State {
  Store store;
  std::vector<Term> pc;
  std::vector<std::string> path;
};

struct Returned {
  State state;
  SymValue value;
  SourcePos pos;
};

struct Outcome {
  std::vector<State> normal;
  std::vector<Returned> returned;
};

struct Pending {
  std::string name;
  std::vector<Term> pc;
  Term goal;
  std::vector<std::string> path;
};

Sort scalar_sort(const Type& t) { return t.sort(); }

std::vector<std::pair<std::string, Sort>> slots(const Program& p, const std::string& base, const Type& t) {
  std::vector<std::pair<std::string, Sort>> out;
  switch (t.kind) {
    case Type::Kind::Record:
      for (const auto& f : p.find_record(t.record)->fields) out.emplace_back(base + "." + f.name, scalar_sort(f.type));
      break;
    case Type::Kind::Array:
      for (int i = 0; i < t.length; ++i) out.emplace_back(base + "[" + std::to_string(i) + "]", Sort::Float64);
      break;
    default: out.emplace_back(base, scalar_sort(t));
  }
  return out;
}

SymValue fresh_value(const Program& p, const std::string& base, const Type& type, const std::string& suffix = "") {
  SymValue v{type, {}};
  for (const auto& [name, sort] : slots(p, base, type)) v.parts.push_back(t::var(name + suffix, sort));
  return v;
}

Term zero_of(Sort s) {
  switch (s) {
    case Sort::Bool: return t::boolean(false);
    case Sort::Int: return t::integer(0);
    default: return t::fp(FpLiteral::zero(s, false));
  }
}

void split_conjuncts(const Expr& e, std::vector<const Expr*>& out) {
  if (e.kind == ExprKind::Binary && e.binop == BinOp::And) {
    split_conjuncts(e.args[0], out);
    split_conjuncts(e.args[1], out);
  } else {
    out.push_back(&e);
  }
}

std::string at_line(const char* what, SourcePos pos) { return std::string(what) + "@" + std::to_string(pos.line); }

std::string join_path(const std::vector<std::string>& path) {
  std::string s;
  for (const auto& p : path) {
    if (!s.empty()) s += " ";
    s += p;
  }
  return s.empty() ? "straight-line" : s;
}

class Executor {
 public:
  Executor(const TypedProgram& p, const MethodDecl& m) : p_(p.program) {
    for (const auto& prm : m.params) inputs_[prm.name] = fresh_value(p_, prm.name, prm.type);
  }

  const Store& inputs() const { return inputs_; }
  std::vector<Pending>& loop_goals() { return loop_goals_; }

  void set_loops_allowed(bool v) { loops_allowed_ = v; }

  Outcome run(const std::vector<Stmt>& body) {
    State s;
    s.store = inputs_;
    return exec(body, std::move(s));
  }

  // Encodes a specification or code expression against a store.
  SymValue enc(const Expr& e, const Store& store, const SymValue* result = nullptr) {
    const Type& ty = *e.type;
    auto scalar = [&](Term x) { return SymValue{ty, {std::move(x)}}; };
    switch (e.kind) {
      case ExprKind::FloatLit: return scalar(t::fp(encode_decimal(e.text, e.single ? Sort::Float32 : Sort::Float64)));
      case ExprKind::IntLit: return scalar(t::integer(e.ival));
      case ExprKind::BoolLit: return scalar(t::boolean(e.ival != 0));
      case ExprKind::Var: {
        if (auto it = store.find(e.name); it != store.end()) return it->second;
        if (const ConstDecl* c = p_.find_constant(e.name)) return enc(c->value, {});
        throw VcError("unbound variable '" + e.name + "' at line " + std::to_string(e.pos.line));
      }
      case ExprKind::Result:
        if (!result) throw VcError("\\result used outside a postcondition");
        return *result;
      case ExprKind::Field: {
        const SymValue base = enc(e.args[0], store, result);
        const int idx = p_.find_record(base.type.record)->field_index(e.name);
        return scalar(base.parts[static_cast<std::size_t>(idx)]);
      }
      case ExprKind::Index: {
        const SymValue base = enc(e.args[0], store, result);
        const auto i = fold_int(e.args[1]);
        if (!i) throw VcError("array index at line " + std::to_string(e.pos.line) + " is not a compile-time constant");
        if (*i < 0 || *i >= static_cast<std::int64_t>(base.parts.size())) throw VcError("array index out of bounds at line " + std::to_string(e.pos.line));
        return scalar(base.parts[static_cast<std::size_t>(*i)]);
      }
      case ExprKind::Length: return scalar(t::integer(e.args[0].type->length));
      case ExprKind::Unary: {
        const Term a = enc(e.args[0], store, result).scalar();
        if (e.unop == UnOp::Not) return scalar(t::not_(a));
        if (a.sort() == Sort::Int) return scalar(t::int_sub(t::integer(0), a));
        if (a.op() == Op::FpConst) return scalar(t::fp(a.literal().negated()));
        return scalar(t::fp_neg(a));
      }
      case ExprKind::Binary: return scalar(binary(e, store, result));
      case ExprKind::Call: {
        std::vector<Term> args;
        for (const auto& a : e.args) args.push_back(enc(a, store, result).scalar());
        if (auto pred = spec_predicate_from_name(e.name)) return scalar(build_spec_predicate(*pred, args));
        if (e.name == "abs") return scalar(t::fp_abs(args[0]));
        if (auto fn = fn_from_name(e.name)) return scalar(t::apply(*fn, args[0]));
        throw VcError("call to '" + e.name + "' was not inlined");
      }
      case ExprKind::Forall: throw VcError("quantifier at line " + std::to_string(e.pos.line) + " was not unrolled");
      case ExprKind::NewRecord:
      case ExprKind::NewArray: {
        SymValue v{ty, {}};
        for (const auto& a : e.args) v.parts.push_back(enc(a, store, result).scalar());
        return v;
      }
    }
    throw VcError("unhandled expression");
  }

 private:
  Term binary(const Expr& e, const Store& store, const SymValue* result) {
    const Term a = enc(e.args[0], store, result).scalar();
    const Term b = enc(e.args[1], store, result).scalar();
    const bool is_int = a.sort() == Sort::Int;
    switch (e.binop) {
      case BinOp::Add: return is_int ? t::int_add(a, b) : t::fp_add(a, b);
      case BinOp::Sub: return is_int ? t::int_sub(a, b) : t::fp_sub(a, b);
      case BinOp::Mul: return is_int ? t::int_mul(a, b) : t::fp_mul(a, b);
      case BinOp::Div: return t::fp_div(a, b);
      case BinOp::Lt: return is_int ? t::int_lt(a, b) : t::fp_lt(a, b);
      case BinOp::Le: return is_int ? t::int_leq(a, b) : t::fp_leq(a, b);
      case BinOp::Gt: return is_int ? t::int_gt(a, b) : t::fp_gt(a, b);
      case BinOp::Ge: return is_int ? t::int_geq(a, b) : t::fp_geq(a, b);
      case BinOp::Eq:
        if (is_fp(a.sort())) return t::fp_eq(a, b);
        return a.sort() == Sort::Bool ? t::iff(a, b) : t::eq(a, b);
      case BinOp::Ne:
        if (is_fp(a.sort())) return t::not_(t::fp_eq(a, b));
        return t::not_(a.sort() == Sort::Bool ? t::iff(a, b) : t::eq(a, b));
      case BinOp::And: return t::and_({a, b});
      case BinOp::Or: return t::or_({a, b});
      case BinOp::Implies: return t::implies(a, b);
      case BinOp::Iff: return t::iff(a, b);
    }
    throw VcError("unhandled operator");
  }

  Outcome exec(const std::vector<Stmt>& body, State start) {
    Outcome out;
    std::vector<State> live;
    live.push_back(std::move(start));
    for (const auto& s : body) {
      std::vector<State> next;
      for (auto& st : live) {
        Outcome o = stmt(s, std::move(st));
        for (auto& n : o.normal) next.push_back(std::move(n));
        for (auto& r : o.returned) out.returned.push_back(std::move(r));
      }
      live = std::move(next);
      if (live.empty()) break;
    }
    out.normal = std::move(live);
    return out;
  }

  // Drops names that went out of scope.
  static void restrict_to(State& st, const Store& outer) {
    for (auto it = st.store.begin(); it != st.store.end();) {
      if (!outer.contains(it->first)) it = st.store.erase(it);
      else ++it;
    }
  }

  Outcome stmt(const Stmt& s, State st) {
    Outcome out;
    switch (s.kind) {
      case StmtKind::Decl: {
        SymValue v;
        if (s.expr) {
          v = enc(*s.expr, st.store);
        } else {
          v.type = s.decl_type;
          for (const auto& [name, sort] : slots(p_, s.name, s.decl_type)) v.parts.push_back(zero_of(sort));
        }
        st.store[s.name] = std::move(v);
        out.normal.push_back(std::move(st));
        return out;
      }
      case StmtKind::Assign: {
        SymValue v = enc(*s.expr, st.store);
        const Expr& target = *s.target;
        if (target.kind == ExprKind::Var) {
          st.store[target.name] = std::move(v);
        } else {
          const std::string& root = target.args[0].name;
          auto it = st.store.find(root);
          if (it == st.store.end()) throw VcError("assignment to unknown variable '" + root + "'");
          std::size_t idx = 0;
          if (target.kind == ExprKind::Field) {
            idx = static_cast<std::size_t>(p_.find_record(it->second.type.record)->field_index(target.name));
          } else {
            const auto i = fold_int(target.args[1]);
            if (!i || *i < 0 || *i >= static_cast<std::int64_t>(it->second.parts.size()))
              throw VcError("array index at line " + std::to_string(s.pos.line) + " must be an in-bounds constant");
            idx = static_cast<std::size_t>(*i);
          }
          it->second.parts[idx] = v.scalar();
        }
        out.normal.push_back(std::move(st));
        return out;
      }
      case StmtKind::Block: {
        const Store outer = st.store;
        out = exec(s.body, std::move(st));
        for (auto& n : out.normal) restrict_to(n, outer);
        return out;
      }
      case StmtKind::Return:
        out.returned.push_back({st, enc(*s.expr, st.store), s.pos});
        return out;
      case StmtKind::If: return branch(s, std::move(st));
      case StmtKind::While: return loop(s, std::move(st));
    }
    throw VcError("unhandled statement");
  }

  Outcome branch(const Stmt& s, State st) {
    const Term c = enc(*s.expr, st.store).scalar();
    if (c.op() == Op::BoolConst) {
      const Store outer = st.store;
      Outcome o = exec(c.bool_value() ? s.body : s.else_body, std::move(st));
      for (auto& n : o.normal) restrict_to(n, outer);
      return o;
    }
    State th = st, el = st;
    th.pc.push_back(c);
    el.pc.push_back(t::not_(c));
    Outcome a = exec(s.body, std::move(th));
    Outcome b = exec(s.else_body, std::move(el));
    for (auto& n : a.normal) restrict_to(n, st.store);
    for (auto& n : b.normal) restrict_to(n, st.store);

    Outcome out;
    if (a.returned.empty() && b.returned.empty() && a.normal.size() == 1 && b.normal.size() == 1) {
      // Merge both arms into one state with if-then-else values.
      State merged = std::move(st);
      for (auto& [name, v] : merged.store) {
        const SymValue& tv = a.normal[0].store.at(name);
        const SymValue& ev = b.normal[0].store.at(name);
        for (std::size_t i = 0; i < v.parts.size(); ++i) v.parts[i] = t::ite(c, tv.parts[i], ev.parts[i]);
      }
      out.normal.push_back(std::move(merged));
      return out;
    }
    // Label the fork right after the parent's path; nested labels follow.
    const std::size_t depth = st.path.size();
    auto insert_at = [&](Outcome& o, const std::string& label) {
      for (auto& n : o.normal) n.path.insert(n.path.begin() + static_cast<long>(depth), label);
      for (auto& r : o.returned) r.state.path.insert(r.state.path.begin() + static_cast<long>(depth), label);
    };
    insert_at(a, at_line("then", s.pos));
    insert_at(b, at_line("else", s.pos));
    for (auto& n : a.normal) out.normal.push_back(std::move(n));
    for (auto& n : b.normal) out.normal.push_back(std::move(n));
    for (auto& r : a.returned) out.returned.push_back(std::move(r));
    for (auto& r : b.returned) out.returned.push_back(std::move(r));
    return out;
  }

  static void assigned_roots(const std::vector<Stmt>& body, std::set<std::string>& out) {
    for (const auto& s : body) {
      if (s.kind == StmtKind::Assign) {
        const Expr& tgt = *s.target;
        out.insert(tgt.kind == ExprKind::Var ? tgt.name : tgt.args[0].name);
      }
      if (s.kind == StmtKind::Return) throw VcError("return inside a loop body (line " + std::to_string(s.pos.line) + ") is not supported");
      assigned_roots(s.body, out);
      assigned_roots(s.else_body, out);
    }
  }

  Outcome loop(const Stmt& s, State st) {
    if (!loops_allowed_) throw VcError("loop at line " + std::to_string(s.pos.line) + " needs the loop rule; use generate_obligations");
    if (!s.invariant) throw VcError("loop at line " + std::to_string(s.pos.line) + " has no loop invariant");
    const int n = ++loop_counter_;
    const std::string base = "loop" + std::to_string(n);
    std::vector<std::string> path = st.path;
    path.push_back(at_line("loop", s.pos));

    // Initially valid.
    loop_goals_.push_back({base + ".init", st.pc, enc(*s.invariant, st.store).scalar(), path});

    // Havoc every outer variable the body may assign.
    std::set<std::string> modified;
    assigned_roots(s.body, modified);
    State h = st;
    const std::string sfx = "@" + std::to_string(++havoc_counter_);
    for (const auto& name : modified) {
      auto it = h.store.find(name);
      if (it == h.store.end()) continue;  // declared inside the body
      it->second = fresh_value(p_, name, it->second.type, sfx);
    }
    const Term inv_h = enc(*s.invariant, h.store).scalar();
    const Term guard_h = enc(*s.expr, h.store).scalar();

    // Preserved by one iteration.
    State iter = h;
    iter.pc.push_back(inv_h);
    iter.pc.push_back(guard_h);
    iter.path = path;
    Outcome body = exec(s.body, std::move(iter));
    for (auto& after : body.normal) {
      loop_goals_.push_back({base + ".preserve", after.pc, enc(*s.invariant, after.store).scalar(), after.path});
    }

    // Continue after the loop in the havocked state.
    h.pc.push_back(inv_h);
    h.pc.push_back(t::not_(guard_h));
    h.path = std::move(path);
    Outcome out;
    out.normal.push_back(std::move(h));
    return out;
  }

  const Program& p_;
  Store inputs_;
  std::vector<Pending> loop_goals_;
  int loop_counter_ = 0;
  int havoc_counter_ = 0;
  bool loops_allowed_ = true;
};

void make_names_unique(std::vector<ProofObligation>& obs) {
  std::map<std::string, int> count, seen;
  for (const auto& o : obs) ++count[o.name];
  for (auto& o : obs)
    if (count[o.name] > 1) o.name += "_p" + std::to_string(++seen[o.name]);
}

const MethodDecl& find_method(const TypedProgram& p, std::string_view name) {
  const MethodDecl* m = p.program.find_method(name);
  if (!m) throw VcError("no method named '" + std::string(name) + "'");
  return *m;
}

}  // namespace

std::vector<std::pair<std::string, Sort>> input_symbols(const TypedProgram& p, const MethodDecl& m) {
  std::vector<std::pair<std::string, Sort>> out;
  for (const auto& prm : m.params)
    for (auto& s : slots(p.program, prm.name, prm.type)) out.push_back(std::move(s));
  return out;
}

Term wp(const TypedProgram& p, const MethodDecl& m0, const Term& post) {
  const MethodDecl m = inline_calls(p, m0, VcOptions{}.inlineDepth);
  Executor ex(p, m);
  ex.set_loops_allowed(false);
  const Outcome o = ex.run(m.body);
  std::vector<Term> parts;
  for (const auto& r : o.returned) {
    Binding b;
    const auto names = slots(p.program, "\\result", m.return_type);
    for (std::size_t i = 0; i < names.size(); ++i) b[names[i].first] = r.value.parts[i];
    parts.push_back(t::implies(t::and_(r.state.pc), substitute(post, b)));
  }
  return t::and_(std::move(parts));
}

std::vector<ProofObligation> generate_obligations(const TypedProgram& p0, std::string_view method, int contract,
                                                  const VcOptions& opts) {
  if (opts.inlineDepth < 1) throw VcError("inlineDepth must be at least 1");
  const TypedProgram unrolled = has_spec_quantifiers(p0.program) ? unroll_spec_quantifiers(p0) : p0;
  const TypedProgram& p = unrolled;
  const MethodDecl& original = find_method(p, method);
  if (contract < 0 || contract >= static_cast<int>(original.contracts.size()))
    throw VcError("method '" + original.name + "' has no contract " + std::to_string(contract + 1));
  const Contract& c = original.contracts[static_cast<std::size_t>(contract)];
  const MethodDecl m = inline_calls(p, original, opts.inlineDepth);

  Executor ex(p, m);
  const Term pre = c.requires_ ? ex.enc(*c.requires_, ex.inputs()).scalar() : t::boolean(true);
  const Outcome o = ex.run(m.body);
  if (!o.normal.empty()) throw VcError("method '" + m.name + "' can finish without returning");

  std::vector<Pending> goals = std::move(ex.loop_goals());
  std::vector<const Expr*> conjuncts;
  if (c.ensures) split_conjuncts(*c.ensures, conjuncts);
  for (const auto& r : o.returned) {
    for (std::size_t k = 0; k < conjuncts.size(); ++k) {
      std::vector<std::string> path = r.state.path;
      path.push_back(at_line("return", r.pos));
      goals.push_back({"post" + std::to_string(k + 1), r.state.pc, ex.enc(*conjuncts[k], ex.inputs(), &r.value).scalar(), path});
    }
  }

  std::vector<ProofObligation> out;
  auto hyps_of = [&](const std::vector<Term>& pc) {
    std::vector<Term> h;
    if (!(pre.op() == Op::BoolConst && pre.bool_value())) h.push_back(pre);
    for (const auto& x : pc) h.push_back(x);
    return h;
  };
  if (opts.splitGoals) {
    for (auto& g : goals) {
      ProofObligation ob;
      ob.name = g.name;
      ob.hypotheses = hyps_of(g.pc);
      ob.goal = g.goal;
      ob.provenance = {original.name, contract + 1, join_path(g.path)};
      out.push_back(std::move(ob));
    }
    make_names_unique(out);
  } else {
    ProofObligation ob;
    ob.name = "all";
    ob.hypotheses = hyps_of({});
    std::vector<Term> parts;
    for (const auto& g : goals) parts.push_back(t::implies(t::and_(g.pc), g.goal));
    ob.goal = t::and_(std::move(parts));
    ob.provenance = {original.name, contract + 1, "all paths"};
    out.push_back(std::move(ob));
  }
  for (auto& ob : out) {
    std::vector<Term> all = ob.hypotheses;
    all.push_back(ob.goal);
    ob.occurrences = collect_occurrences(all);
  }
  return out;
}

std::string obligations_to_json(const std::vector<ProofObligation>& obligations) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& o : obligations) {
    nlohmann::json j;
    j["name"] = o.name;
    j["method"] = o.provenance.method;
    j["contract"] = o.provenance.contract;
    j["path"] = o.provenance.path;
    j["hypotheses"] = nlohmann::json::array();
    for (const auto& h : o.hypotheses) j["hypotheses"].push_back(to_string(h));
    j["goal"] = to_string(o.goal);
    j["occurrences"] = nlohmann::json::array();
    for (const auto& oc : o.occurrences) j["occurrences"].push_back(std::string(fn_name(oc.fn)) + " " + to_string(oc.arg));
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

}  // namespace floatdv
