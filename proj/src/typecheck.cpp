#include "floatdv/typecheck.hpp"

#include <map>
#include <set>

#include "floatdv/parser.hpp"
#include "floatdv/term.hpp"

namespace floatdv::minif {

namespace {

// Thrown inside one statement or clause; the checker records it and moves on.
struct Abort {
  Diagnostic diag;
};

[[noreturn]] void error(SourcePos pos, std::string msg) { throw Abort{{pos, std::move(msg)}}; }

enum class Ctx { Body, Requires, Ensures, Invariant };

bool is_spec(Ctx c) { return c != Ctx::Body; }

class Checker {
 public:
  explicit Checker(Program& p) : p_(p) {}

  void run() {
    check_records();
    check_constants();
    for (auto& m : p_.methods) check_method(m);
    if (!diags_.empty()) throw TypeError(std::move(diags_));
  }

 private:
  void guard(auto&& f) {
    try {
      f();
    } catch (const Abort& a) {
      diags_.push_back(a.diag);
    }
  }

  void check_records() {
    for (auto& r : p_.records)
      for (auto& f : r.fields)
        if (!f.type.is_fp())
          diags_.push_back({r.pos, "field '" + f.name + "' of record " + r.name + " must be float or double"});
  }

  void check_constants() {
    for (auto& c : p_.constants) {
      guard([&] {
        if (!c.type.is_scalar()) error(c.pos, "constant '" + c.name + "' must have a scalar type");
        const Expr* lit = &c.value;
        if (lit->kind == ExprKind::Unary && lit->unop == UnOp::Neg) lit = &lit->args[0];
        if (lit->kind != ExprKind::FloatLit && lit->kind != ExprKind::IntLit && lit->kind != ExprKind::BoolLit)
          error(c.value.pos, "constant '" + c.name + "' must be initialized with a literal");
        scopes_.clear();
        const Type t = expr(c.value, Ctx::Body);
        if (!(t == c.type)) error(c.value.pos, "constant '" + c.name + "' declared " + c.type.str() + " but initialized with " + t.str());
      });
    }
  }

  void check_type_exists(const Type& t, SourcePos pos) {
    if (t.kind == Type::Kind::Record && !p_.find_record(t.record)) error(pos, "unknown type '" + t.record + "'");
  }

  void check_method(MethodDecl& m) {
    method_ = &m;
    scopes_.assign(1, {});
    guard([&] { check_type_exists(m.return_type, m.pos); });
    for (auto& prm : m.params) {
      guard([&] { check_type_exists(prm.type, m.pos); });
      if (p_.find_constant(prm.name)) diags_.push_back({m.pos, "parameter '" + prm.name + "' shadows a constant"});
      scopes_.back()[prm.name] = prm.type;
    }
    for (auto& c : m.contracts) {
      if (c.requires_) guard([&] { expect_bool(*c.requires_, Ctx::Requires, "requires clause"); });
      if (c.ensures) guard([&] { expect_bool(*c.ensures, Ctx::Ensures, "ensures clause"); });
    }
    stmts(m.body);
    if (!always_returns(m.body)) diags_.push_back({m.pos, "method '" + m.name + "' can finish without returning a value"});
    method_ = nullptr;
  }

  static bool always_returns(const std::vector<Stmt>& body) {
    for (const auto& s : body) {
      if (s.kind == StmtKind::Return) return true;
      if (s.kind == StmtKind::Block && always_returns(s.body)) return true;
      if (s.kind == StmtKind::If && s.has_else && always_returns(s.body) && always_returns(s.else_body)) return true;
    }
    return false;
  }

  void stmts(std::vector<Stmt>& body) {
    scopes_.emplace_back();
    for (auto& s : body) stmt(s);
    scopes_.pop_back();
  }

  const Type* lookup_local(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  void stmt(Stmt& s) {
    switch (s.kind) {
      case StmtKind::Decl:
        guard([&] {
          check_type_exists(s.decl_type, s.pos);
          if (lookup_local(s.name) || p_.find_constant(s.name)) error(s.pos, "redeclaration of '" + s.name + "'");
          if (!s.expr) error(s.pos, "local '" + s.name + "' needs an initializer");
          const Type t = expr(*s.expr, Ctx::Body);
          if (!(t == s.decl_type)) error(s.expr->pos, "cannot initialize " + s.decl_type.str() + " '" + s.name + "' with " + t.str());
        });
        // Keep the name visible even after an error to avoid cascades.
        scopes_.back().emplace(s.name, s.decl_type);
        return;
      case StmtKind::Assign:
        guard([&] {
          const Type lhs = lvalue(*s.target);
          const Type rhs = expr(*s.expr, Ctx::Body);
          if (!(lhs == rhs)) error(s.expr->pos, "cannot assign " + rhs.str() + " to " + lhs.str());
        });
        return;
      case StmtKind::Block:
        stmts(s.body);
        return;
      case StmtKind::If:
        guard([&] { expect_bool(*s.expr, Ctx::Body, "if condition"); });
        stmts(s.body);
        stmts(s.else_body);
        return;
      case StmtKind::While:
        guard([&] { expect_bool(*s.expr, Ctx::Body, "loop condition"); });
        if (s.invariant) guard([&] { expect_bool(*s.invariant, Ctx::Invariant, "loop invariant"); });
        stmts(s.body);
        return;
      case StmtKind::Return:
        guard([&] {
          const Type t = expr(*s.expr, Ctx::Body);
          if (!(t == method_->return_type))
            error(s.expr->pos, "method '" + method_->name + "' returns " + method_->return_type.str() + ", not " + t.str());
        });
        return;
    }
  }

  Type lvalue(Expr& e) {
    switch (e.kind) {
      case ExprKind::Var: {
        const Type* t = lookup_local(e.name);
        if (!t) {
          if (p_.find_constant(e.name)) error(e.pos, "cannot assign to constant '" + e.name + "'");
          error(e.pos, "unknown identifier '" + e.name + "'");
        }
        e.type = *t;
        return *t;
      }
      case ExprKind::Field:
      case ExprKind::Index:
        if (e.args[0].kind != ExprKind::Var) error(e.pos, "only fields and elements of local variables can be assigned");
        return expr(e, Ctx::Body);
      default: error(e.pos, "invalid assignment target");
    }
  }

  void expect_bool(Expr& e, Ctx ctx, const char* what) {
    const Type t = expr(e, ctx);
    if (t.kind != Type::Kind::Bool) error(e.pos, std::string(what) + " must be boolean, found " + t.str());
  }

  Type expr(Expr& e, Ctx ctx) {
    Type t = infer(e, ctx);
    e.type = t;
    return t;
  }

  Type infer(Expr& e, Ctx ctx) {
    switch (e.kind) {
      case ExprKind::FloatLit: return e.single ? Type::float32() : Type::float64();
      case ExprKind::IntLit: return Type::integer();
      case ExprKind::BoolLit: return Type::boolean();
      case ExprKind::Var: {
        for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
          if (*it == e.name) return Type::integer();
        if (const Type* t = lookup_local(e.name)) return *t;
        if (const ConstDecl* c = p_.find_constant(e.name)) return c->type;
        error(e.pos, "unknown identifier '" + e.name + "'");
      }
      case ExprKind::Result:
        if (ctx != Ctx::Ensures) error(e.pos, "\\result may only appear in an ensures clause");
        return method_->return_type;
      case ExprKind::Field: {
        const Type base = expr(e.args[0], ctx);
        if (base.kind != Type::Kind::Record) error(e.pos, "field access on non-record type " + base.str());
        const RecordDecl* r = p_.find_record(base.record);
        const int idx = r->field_index(e.name);
        if (idx < 0) error(e.pos, "record " + r->name + " has no field '" + e.name + "'");
        return r->fields[static_cast<std::size_t>(idx)].type;
      }
      case ExprKind::Length: {
        const Type base = expr(e.args[0], ctx);
        if (base.kind != Type::Kind::Array) error(e.pos, ".length on non-array type " + base.str());
        return Type::integer();
      }
      case ExprKind::Index: {
        const Type base = expr(e.args[0], ctx);
        if (base.kind != Type::Kind::Array) error(e.pos, "indexing a non-array type " + base.str());
        const Type idx = expr(e.args[1], ctx);
        if (idx.kind != Type::Kind::Int) error(e.args[1].pos, "array index must be int");
        if (auto v = fold_int(e.args[1]); v && (*v < 0 || *v >= base.length))
          error(e.args[1].pos, "index " + std::to_string(*v) + " out of bounds for " + base.str());
        if (!is_spec(ctx) && !fold_int(e.args[1])) error(e.args[1].pos, "array index must be a compile-time constant");
        return Type::float64();
      }
      case ExprKind::Unary: {
        const Type a = expr(e.args[0], ctx);
        if (e.unop == UnOp::Not) {
          if (a.kind != Type::Kind::Bool) error(e.pos, "'!' needs a boolean operand, found " + a.str());
          return a;
        }
        if (!a.is_fp() && a.kind != Type::Kind::Int) error(e.pos, "unary '-' needs a numeric operand, found " + a.str());
        return a;
      }
      case ExprKind::Binary: return binary(e, ctx);
      case ExprKind::Call: return call(e, ctx);
      case ExprKind::Forall: {
        if (!is_spec(ctx)) error(e.pos, "\\forall may only appear in specifications");
        if (lookup_local(e.name) || p_.find_constant(e.name)) error(e.pos, "quantified variable '" + e.name + "' shadows a declaration");
        bound_.push_back(e.name);
        expect_bool(e.args[0], ctx, "quantifier range");
        expect_bool(e.args[1], ctx, "quantifier body");
        bound_.pop_back();
        return Type::boolean();
      }
      case ExprKind::NewRecord: {
        const RecordDecl* r = p_.find_record(e.name);
        if (!r) error(e.pos, "unknown record type '" + e.name + "'");
        if (e.args.size() != r->fields.size())
          error(e.pos, "record " + r->name + " has " + std::to_string(r->fields.size()) + " fields, " + std::to_string(e.args.size()) + " given");
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          const Type a = expr(e.args[i], ctx);
          if (!(a == r->fields[i].type))
            error(e.args[i].pos, "field '" + r->fields[i].name + "' of " + r->name + " is " + r->fields[i].type.str() + ", not " + a.str());
        }
        return Type::record_of(r->name);
      }
      case ExprKind::NewArray:
        for (auto& a : e.args)
          if (!(expr(a, ctx) == Type::float64())) error(a.pos, "array elements must be double");
        return Type::array_of(static_cast<int>(e.args.size()));
    }
    error(e.pos, "unhandled expression");
  }

  Type binary(Expr& e, Ctx ctx) {
    const Type l = expr(e.args[0], ctx);
    const Type r = expr(e.args[1], ctx);
    const std::string op(binop_text(e.binop));
    const std::string msg = "operands of '" + op + "' have types " + l.str() + " and " + r.str();
    switch (e.binop) {
      case BinOp::Add:
      case BinOp::Sub:
      case BinOp::Mul:
      case BinOp::Div:
        if (!(l == r)) error(e.pos, msg);
        if (l.is_fp()) return l;
        if (l.kind == Type::Kind::Int && e.binop != BinOp::Div) return l;
        error(e.pos, msg);
      case BinOp::Lt:
      case BinOp::Le:
      case BinOp::Gt:
      case BinOp::Ge:
        if (!(l == r) || !(l.is_fp() || l.kind == Type::Kind::Int)) error(e.pos, msg);
        return Type::boolean();
      case BinOp::Eq:
      case BinOp::Ne:
        if (!(l == r) || !l.is_scalar()) error(e.pos, msg);
        return Type::boolean();
      case BinOp::And:
      case BinOp::Or:
      case BinOp::Implies:
      case BinOp::Iff:
        if (l.kind != Type::Kind::Bool || r.kind != Type::Kind::Bool) error(e.pos, msg);
        return Type::boolean();
    }
    error(e.pos, msg);
  }

  Type call(Expr& e, Ctx ctx) {
    std::vector<Type> args;
    for (auto& a : e.args) args.push_back(expr(a, ctx));
    auto arity = [&](std::size_t n) {
      if (args.size() != n)
        error(e.pos, "'" + e.name + "' expects " + std::to_string(n) + " argument(s), " + std::to_string(args.size()) + " given");
    };
    if (auto pred = spec_predicate_from_name(e.name)) {
      if (!is_spec(ctx)) error(e.pos, "predicate '" + e.name + "' may only appear in specifications");
      arity(spec_predicate_arity(*pred));
      for (std::size_t i = 0; i < args.size(); ++i)
        if (!args[i].is_fp()) error(e.args[i].pos, "'" + e.name + "' needs a floating-point operand, found " + args[i].str());
      if (args.size() == 2 && !(args[0] == args[1])) error(e.pos, "operands of '" + e.name + "' have different formats");
      return Type::boolean();
    }
    if (is_builtin(e.name)) {
      arity(1);
      if (e.name == "abs") {
        if (!args[0].is_fp()) error(e.args[0].pos, "abs needs a floating-point operand");
        return args[0];
      }
      if (!(args[0] == Type::float64())) error(e.args[0].pos, "'" + e.name + "' is defined on double only, found " + args[0].str());
      return Type::float64();
    }
    const MethodDecl* m = p_.find_method(e.name);
    if (!m) error(e.pos, "unknown method '" + e.name + "'");
    if (is_spec(ctx)) error(e.pos, "method calls are not allowed in specifications");
    arity(m->params.size());
    for (std::size_t i = 0; i < args.size(); ++i)
      if (!(args[i] == m->params[i].type))
        error(e.args[i].pos, "argument " + std::to_string(i + 1) + " of '" + m->name + "' must be " + m->params[i].type.str() + ", not " + args[i].str());
    return m->return_type;
  }

  Program& p_;
  const MethodDecl* method_ = nullptr;
  std::vector<std::map<std::string, Type>> scopes_;
  std::vector<std::string> bound_;
  std::vector<Diagnostic> diags_;
};

// --- unrolling ---

void collect_conjuncts(const Expr& e, std::vector<const Expr*>& out) {
  if (e.kind == ExprKind::Binary && e.binop == BinOp::And) {
    collect_conjuncts(e.args[0], out);
    collect_conjuncts(e.args[1], out);
  } else {
    out.push_back(&e);
  }
}

bool is_var(const Expr& e, const std::string& name) { return e.kind == ExprKind::Var && e.name == name; }

// Replaces free occurrences of the quantified variable by an integer literal.
void bind_index(Expr& e, const std::string& name, std::int64_t v) {
  if (e.kind == ExprKind::Forall && e.name == name) return;
  if (is_var(e, name)) {
    const SourcePos pos = e.pos;
    e = Expr::int_lit(v, pos);
    e.type = Type::integer();
    return;
  }
  for (auto& a : e.args) bind_index(a, name, v);
}

Expr unroll(const Expr& e);

Expr unroll_forall(const Expr& q) {
  const std::string& i = q.name;
  std::vector<const Expr*> parts;
  collect_conjuncts(q.args[0], parts);
  std::optional<std::int64_t> lo, hi;  // inclusive bounds
  for (const Expr* c : parts) {
    if (c->kind != ExprKind::Binary) throw TypeError(c->pos, "unsupported quantifier range conjunct '" + print_expr(*c) + "'");
    BinOp op = c->binop;
    const Expr* other = nullptr;
    if (is_var(c->args[1], i)) {
      other = &c->args[0];
      // mirror `k op i` into `i op' k`
      switch (op) {
        case BinOp::Lt: op = BinOp::Gt; break;
        case BinOp::Le: op = BinOp::Ge; break;
        case BinOp::Gt: op = BinOp::Lt; break;
        case BinOp::Ge: op = BinOp::Le; break;
        default: break;
      }
    } else if (is_var(c->args[0], i)) {
      other = &c->args[1];
    } else {
      throw TypeError(c->pos, "unsupported quantifier range conjunct '" + print_expr(*c) + "'");
    }
    const auto k = fold_int(*other);
    if (!k) throw TypeError(other->pos, "unbounded quantified range: '" + print_expr(*other) + "' is not a compile-time integer");
    switch (op) {
      case BinOp::Ge: lo = std::max(lo.value_or(*k), *k); break;
      case BinOp::Gt: lo = std::max(lo.value_or(*k + 1), *k + 1); break;
      case BinOp::Le: hi = std::min(hi.value_or(*k), *k); break;
      case BinOp::Lt: hi = std::min(hi.value_or(*k - 1), *k - 1); break;
      case BinOp::Eq:
        lo = std::max(lo.value_or(*k), *k);
        hi = std::min(hi.value_or(*k), *k);
        break;
      default: throw TypeError(c->pos, "unsupported quantifier range conjunct '" + print_expr(*c) + "'");
    }
  }
  if (!lo || !hi) throw TypeError(q.pos, "unbounded quantified range for '" + i + "'");
  if (*hi - *lo > 4096) throw TypeError(q.pos, "quantified range for '" + i + "' is too large to unroll");
  std::optional<Expr> acc;
  for (std::int64_t v = *lo; v <= *hi; ++v) {
    Expr body = q.args[1];
    bind_index(body, i, v);
    body = unroll(body);
    if (!acc) {
      acc = std::move(body);
    } else {
      acc = Expr::binary(BinOp::And, std::move(*acc), std::move(body), q.pos);
      acc->type = Type::boolean();
    }
  }
  if (!acc) {
    Expr t = Expr::bool_lit(true, q.pos);
    t.type = Type::boolean();
    return t;
  }
  return *acc;
}

Expr unroll(const Expr& e) {
  if (e.kind == ExprKind::Forall) return unroll_forall(e);
  Expr out = e;
  for (auto& a : out.args) a = unroll(a);
  return out;
}

void unroll_stmts(std::vector<Stmt>& body) {
  for (auto& s : body) {
    if (s.invariant) s.invariant = unroll(*s.invariant);
    unroll_stmts(s.body);
    unroll_stmts(s.else_body);
  }
}

}  // namespace

std::optional<std::int64_t> fold_int(const Expr& e) {
  switch (e.kind) {
    case ExprKind::IntLit: return e.ival;
    case ExprKind::Length:
      if (e.args[0].type && e.args[0].type->kind == Type::Kind::Array) return e.args[0].type->length;
      return std::nullopt;
    case ExprKind::Unary:
      if (e.unop == UnOp::Neg)
        if (auto v = fold_int(e.args[0])) return -*v;
      return std::nullopt;
    case ExprKind::Binary: {
      const auto a = fold_int(e.args[0]);
      const auto b = fold_int(e.args[1]);
      if (!a || !b) return std::nullopt;
      switch (e.binop) {
        case BinOp::Add: return *a + *b;
        case BinOp::Sub: return *a - *b;
        case BinOp::Mul: return *a * *b;
        default: return std::nullopt;
      }
    }
    default: return std::nullopt;
  }
}

TypedProgram typecheck(Program p) {
  Checker(p).run();
  return TypedProgram{std::move(p)};
}

TypedProgram unroll_spec_quantifiers(TypedProgram p) {
  for (auto& m : p.program.methods) {
    for (auto& c : m.contracts) {
      if (c.requires_) c.requires_ = unroll(*c.requires_);
      if (c.ensures) c.ensures = unroll(*c.ensures);
    }
    unroll_stmts(m.body);
  }
  return p;
}

bool has_spec_quantifiers(const Program& p) {
  bool found = false;
  auto scan = [&](const Expr& e) {
    if (e.kind == ExprKind::Forall) found = true;
  };
  for (const auto& m : p.methods) {
    for (const auto& c : m.contracts) {
      if (c.requires_) for_each_expr(*c.requires_, scan);
      if (c.ensures) for_each_expr(*c.ensures, scan);
    }
    for_each_expr(m.body, scan);
  }
  return found;
}

}  // namespace floatdv::minif
