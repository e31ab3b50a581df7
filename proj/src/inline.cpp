#include <algorithm>
#include <map>

#include "floatdv/vcgen.hpp"

namespace floatdv {

using namespace minif;

namespace {

bool contains_return(const std::vector<Stmt>& body) {
  for (const auto& s : body) {
    if (s.kind == StmtKind::Return) return true;
    if (contains_return(s.body) || contains_return(s.else_body)) return true;
  }
  return false;
}

bool contains_user_call(const Expr& e) {
  bool found = false;
  for_each_expr(e, [&](const Expr& x) {
    if (x.kind == ExprKind::Call && !is_builtin(x.name) && !spec_predicate_from_name(x.name)) found = true;
  });
  return found;
}

void rename_expr(Expr& e, const std::map<std::string, std::string>& names) {
  if (e.kind == ExprKind::Var) {
    if (auto it = names.find(e.name); it != names.end()) e.name = it->second;
    return;
  }
  for (auto& a : e.args) rename_expr(a, names);
}

// Collects declared locals of a body so they can be renamed together.
void collect_locals(const std::vector<Stmt>& body, std::vector<std::string>& out) {
  for (const auto& s : body) {
    if (s.kind == StmtKind::Decl) out.push_back(s.name);
    collect_locals(s.body, out);
    collect_locals(s.else_body, out);
  }
}

void rename_stmts(std::vector<Stmt>& body, const std::map<std::string, std::string>& names) {
  for (auto& s : body) {
    if (s.kind == StmtKind::Decl)
      if (auto it = names.find(s.name); it != names.end()) s.name = it->second;
    if (s.target) rename_expr(*s.target, names);
    if (s.expr) rename_expr(*s.expr, names);
    if (s.invariant) rename_expr(*s.invariant, names);
    rename_stmts(s.body, names);
    rename_stmts(s.else_body, names);
  }
}

Stmt assign(const std::string& var, const Type& t, Expr value, SourcePos pos) {
  Stmt s;
  s.kind = StmtKind::Assign;
  s.pos = pos;
  Expr target = Expr::var(var, pos);
  target.type = t;
  s.target = std::move(target);
  s.expr = std::move(value);
  return s;
}

// Rewrites `return e` into `ret = e`, duplicating the continuation into
// both arms of any branch that returns so control never falls through.
std::vector<Stmt> eliminate_returns(std::vector<Stmt> body, const std::string& ret, const Type& t) {
  std::vector<Stmt> out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    Stmt& s = body[i];
    auto rest = [&] { return std::vector<Stmt>(std::make_move_iterator(body.begin() + static_cast<long>(i) + 1),
                                               std::make_move_iterator(body.end())); };
    switch (s.kind) {
      case StmtKind::Return:
        out.push_back(assign(ret, t, std::move(*s.expr), s.pos));
        return out;
      case StmtKind::Block:
        if (contains_return(s.body)) {
          std::vector<Stmt> merged = std::move(s.body);
          for (auto& r : rest()) merged.push_back(std::move(r));
          for (auto& r : eliminate_returns(std::move(merged), ret, t)) out.push_back(std::move(r));
          return out;
        }
        out.push_back(std::move(s));
        break;
      case StmtKind::If:
        if (contains_return(s.body) || contains_return(s.else_body)) {
          const std::vector<Stmt> tail = rest();
          std::vector<Stmt> then_b = std::move(s.body);
          std::vector<Stmt> else_b = std::move(s.else_body);
          then_b.insert(then_b.end(), tail.begin(), tail.end());
          else_b.insert(else_b.end(), tail.begin(), tail.end());
          s.body = eliminate_returns(std::move(then_b), ret, t);
          s.else_body = eliminate_returns(std::move(else_b), ret, t);
          s.has_else = true;
          out.push_back(std::move(s));
          return out;
        }
        out.push_back(std::move(s));
        break;
      case StmtKind::While:
        if (contains_return(s.body)) throw VcError("cannot inline a method that returns from inside a loop (line " + std::to_string(s.pos.line) + ")");
        out.push_back(std::move(s));
        break;
      default: out.push_back(std::move(s));
    }
  }
  return out;
}

class Inliner {
 public:
  Inliner(const TypedProgram& p, int depth) : p_(p), depth_(depth) {}

  std::vector<Stmt> body(const MethodDecl& m) {
    stack_.push_back(m.name);
    std::vector<Stmt> out = stmts(m.body);
    stack_.pop_back();
    return out;
  }

 private:
  std::vector<Stmt> stmts(const std::vector<Stmt>& in) {
    std::vector<Stmt> out;
    for (const auto& s : in) stmt(s, out);
    return out;
  }

  void stmt(const Stmt& s0, std::vector<Stmt>& out) {
    Stmt s = s0;
    switch (s.kind) {
      case StmtKind::Decl:
      case StmtKind::Assign:
      case StmtKind::Return:
      case StmtKind::If:
        if (s.target) s.target = rewrite(*s.target, out);
        if (s.expr) s.expr = rewrite(*s.expr, out);
        s.body = stmts(s.body);
        s.else_body = stmts(s.else_body);
        break;
      case StmtKind::While:
        if (contains_user_call(*s.expr))
          throw VcError("method calls in loop conditions are not supported (line " + std::to_string(s.pos.line) + ")");
        s.body = stmts(s.body);
        break;
      case StmtKind::Block:
        s.body = stmts(s.body);
        break;
    }
    out.push_back(std::move(s));
  }

  Expr rewrite(const Expr& e, std::vector<Stmt>& prelude) {
    Expr out = e;
    for (auto& a : out.args) a = rewrite(a, prelude);
    if (out.kind != ExprKind::Call || is_builtin(out.name) || spec_predicate_from_name(out.name)) return out;
    return expand(out, prelude);
  }

  Expr expand(const Expr& call, std::vector<Stmt>& prelude) {
    const MethodDecl* callee = p_.program.find_method(call.name);
    if (!callee) throw VcError("unknown method '" + call.name + "'");
    if (std::find(stack_.begin(), stack_.end(), callee->name) != stack_.end())
      throw VcError("recursive call to '" + callee->name + "' cannot be inlined");
    if (static_cast<int>(stack_.size()) > depth_)
      throw VcError("inlining depth " + std::to_string(depth_) + " exceeded at call to '" + callee->name + "'");

    // Inline the callee's own calls first, then make its names fresh.
    std::vector<Stmt> body = this->body(*callee);
    const int k = ++counter_;
    const std::string sfx = "$" + std::to_string(k);
    std::map<std::string, std::string> names;
    for (const auto& prm : callee->params) names[prm.name] = prm.name + sfx;
    std::vector<std::string> locals;
    collect_locals(body, locals);
    for (const auto& l : locals) names[l] = l + sfx;
    rename_stmts(body, names);

    for (std::size_t i = 0; i < callee->params.size(); ++i) {
      Stmt d;
      d.kind = StmtKind::Decl;
      d.pos = call.pos;
      d.decl_type = callee->params[i].type;
      d.name = names[callee->params[i].name];
      d.expr = call.args[i];
      prelude.push_back(std::move(d));
    }
    const std::string ret = callee->name + "$ret" + sfx;
    Stmt rd;
    rd.kind = StmtKind::Decl;
    rd.pos = call.pos;
    rd.decl_type = callee->return_type;
    rd.name = ret;
    prelude.push_back(std::move(rd));  // no initializer: assigned on every path below
    Stmt blk;
    blk.kind = StmtKind::Block;
    blk.pos = call.pos;
    blk.body = eliminate_returns(std::move(body), ret, callee->return_type);
    prelude.push_back(std::move(blk));

    Expr v = Expr::var(ret, call.pos);
    v.type = callee->return_type;
    return v;
  }

  const TypedProgram& p_;
  int depth_;
  int counter_ = 0;
  std::vector<std::string> stack_;
};

}  // namespace

MethodDecl inline_calls(const TypedProgram& p, const MethodDecl& m, int depth) {
  if (depth < 1) throw VcError("inline depth must be at least 1");
  MethodDecl out = m;
  Inliner in(p, depth);
  out.body = in.body(m);
  return out;
}

}  // namespace floatdv
