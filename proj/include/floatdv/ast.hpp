#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "floatdv/fp_literal.hpp"

namespace floatdv::minif {

struct SourcePos {
  int line = 0;
  int column = 0;
  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

struct Diagnostic {
  SourcePos pos;
  std::string message;
  std::string str() const;
};

/// Carries one or more positioned diagnostics.
class FrontendError : public std::runtime_error {
 public:
  explicit FrontendError(std::vector<Diagnostic> diags);
  FrontendError(SourcePos pos, std::string message) : FrontendError(std::vector<Diagnostic>{{pos, std::move(message)}}) {}
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

class ParseError : public FrontendError {
 public:
  using FrontendError::FrontendError;
};

class TypeError : public FrontendError {
 public:
  using FrontendError::FrontendError;
};

struct Type {
  enum class Kind { Float32, Float64, Bool, Int, Record, Array };
  Kind kind = Kind::Float64;
  std::string record;  // Record
  int length = 0;      // Array of Float64

  static Type float32() { return {Kind::Float32, {}, 0}; }
  static Type float64() { return {Kind::Float64, {}, 0}; }
  static Type boolean() { return {Kind::Bool, {}, 0}; }
  static Type integer() { return {Kind::Int, {}, 0}; }
  static Type record_of(std::string name) { return {Kind::Record, std::move(name), 0}; }
  static Type array_of(int length) { return {Kind::Array, {}, length}; }

  bool is_fp() const { return kind == Kind::Float32 || kind == Kind::Float64; }
  bool is_scalar() const { return kind != Kind::Record && kind != Kind::Array; }
  /// Formula sort of a scalar type.
  Sort sort() const;
  std::string str() const;
  friend bool operator==(const Type&, const Type&) = default;
};

enum class ExprKind {
  FloatLit, IntLit, BoolLit, Var, Result, Field, Index, Length, Unary, Binary, Call, Forall, NewRecord, NewArray
};
enum class UnOp { Neg, Not };
enum class BinOp { Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or, Implies, Iff };

std::string_view binop_text(BinOp op);

/// Expression tree with value semantics.
///
/// `name` holds the variable, field, callee, record, or quantified-variable
/// name; `text` the source spelling of a float literal. `args` are the
/// operands in source order; for Forall they are {range, body}.
struct Expr {
  ExprKind kind = ExprKind::BoolLit;
  SourcePos pos;
  std::string name;
  std::string text;
  bool single = false;  // float literal with an `f` suffix
  std::int64_t ival = 0;
  UnOp unop = UnOp::Neg;
  BinOp binop = BinOp::Add;
  std::vector<Expr> args;
  std::optional<Type> type;  // filled by typecheck

  static Expr float_lit(std::string text, bool single, SourcePos pos = {});
  static Expr int_lit(std::int64_t v, SourcePos pos = {});
  static Expr bool_lit(bool v, SourcePos pos = {});
  static Expr var(std::string name, SourcePos pos = {});
  static Expr unary(UnOp op, Expr e, SourcePos pos = {});
  static Expr binary(BinOp op, Expr l, Expr r, SourcePos pos = {});
  static Expr call(std::string name, std::vector<Expr> args, SourcePos pos = {});
  static Expr field(Expr base, std::string name, SourcePos pos = {});
  static Expr index(Expr base, Expr idx, SourcePos pos = {});
};

enum class StmtKind { Decl, Assign, Block, If, While, Return };

struct Stmt {
  StmtKind kind = StmtKind::Block;
  SourcePos pos;
  Type decl_type;                 // Decl
  std::string name;               // Decl
  std::optional<Expr> target;     // Assign lvalue
  std::optional<Expr> expr;       // Decl init, Assign rhs, Return value, If/While condition
  std::optional<Expr> invariant;  // While
  std::vector<Stmt> body;         // Block, If-then, While body
  std::vector<Stmt> else_body;    // If-else
  bool has_else = false;
};

struct Param {
  std::string name;
  Type type;
};

struct Contract {
  std::optional<Expr> requires_;  // conjunction of the requires clauses, absent means true
  std::optional<Expr> ensures;    // conjunction of the ensures clauses, absent means true
  std::string label;
  SourcePos pos;
};

struct MethodDecl {
  std::string name;
  std::vector<Param> params;
  Type return_type;
  std::vector<Stmt> body;
  std::vector<Contract> contracts;
  SourcePos pos;
};

struct FieldDecl {
  std::string name;
  Type type;
};

struct RecordDecl {
  std::string name;
  std::vector<FieldDecl> fields;
  SourcePos pos;

  /// Index of `field`, or -1.
  int field_index(std::string_view field) const;
};

struct ConstDecl {
  std::string name;
  Type type;
  Expr value;
  SourcePos pos;
};

struct Program {
  std::vector<RecordDecl> records;
  std::vector<ConstDecl> constants;
  std::vector<MethodDecl> methods;

  const RecordDecl* find_record(std::string_view name) const;
  const MethodDecl* find_method(std::string_view name) const;
  const ConstDecl* find_constant(std::string_view name) const;
};

/// Program whose expressions all carry a type annotation.
struct TypedProgram {
  Program program;
};

/// Builtin library calls: sin, cos, atan, sqrt (Float64) and abs (either format).
bool is_builtin(std::string_view name);

/// Visits every expression node (pre-order) of a statement list / expression.
template <class F>
void for_each_expr(const Expr& e, F&& f) {
  f(e);
  for (const auto& a : e.args) for_each_expr(a, f);
}

template <class F>
void for_each_expr(const std::vector<Stmt>& stmts, F&& f) {
  for (const auto& s : stmts) {
    if (s.target) for_each_expr(*s.target, f);
    if (s.expr) for_each_expr(*s.expr, f);
    if (s.invariant) for_each_expr(*s.invariant, f);
    for_each_expr(s.body, f);
    for_each_expr(s.else_body, f);
  }
}

}  // namespace floatdv::minif
