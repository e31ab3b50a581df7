#include "floatdv/parser.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace floatdv::minif {

std::string Diagnostic::str() const {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message;
}

namespace {
std::string join_diags(const std::vector<Diagnostic>& diags) {
  std::string s;
  for (const auto& d : diags) {
    if (!s.empty()) s += "\n";
    s += d.str();
  }
  return s;
}
}  // namespace

FrontendError::FrontendError(std::vector<Diagnostic> diags)
    : std::runtime_error(join_diags(diags)), diags_(std::move(diags)) {}

Sort Type::sort() const {
  switch (kind) {
    case Kind::Float32: return Sort::Float32;
    case Kind::Float64: return Sort::Float64;
    case Kind::Bool: return Sort::Bool;
    case Kind::Int: return Sort::Int;
    default: throw std::logic_error("aggregate type " + str() + " has no scalar sort");
  }
}

std::string Type::str() const {
  switch (kind) {
    case Kind::Float32: return "float";
    case Kind::Float64: return "double";
    case Kind::Bool: return "boolean";
    case Kind::Int: return "int";
    case Kind::Record: return record;
    case Kind::Array: return "double[" + std::to_string(length) + "]";
  }
  return "?";
}

std::string_view binop_text(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
    case BinOp::Implies: return "==>";
    case BinOp::Iff: return "<==>";
  }
  return "?";
}

Expr Expr::float_lit(std::string text, bool single, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::FloatLit;
  e.text = std::move(text);
  e.single = single;
  e.pos = pos;
  return e;
}

Expr Expr::int_lit(std::int64_t v, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::IntLit;
  e.ival = v;
  e.pos = pos;
  return e;
}

Expr Expr::bool_lit(bool v, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::BoolLit;
  e.ival = v ? 1 : 0;
  e.pos = pos;
  return e;
}

Expr Expr::var(std::string name, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Var;
  e.name = std::move(name);
  e.pos = pos;
  return e;
}

Expr Expr::unary(UnOp op, Expr operand, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Unary;
  e.unop = op;
  e.args.push_back(std::move(operand));
  e.pos = pos;
  return e;
}

Expr Expr::binary(BinOp op, Expr l, Expr r, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Binary;
  e.binop = op;
  e.args.push_back(std::move(l));
  e.args.push_back(std::move(r));
  e.pos = pos;
  return e;
}

Expr Expr::call(std::string name, std::vector<Expr> args, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Call;
  e.name = std::move(name);
  e.args = std::move(args);
  e.pos = pos;
  return e;
}

Expr Expr::field(Expr base, std::string name, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Field;
  e.name = std::move(name);
  e.args.push_back(std::move(base));
  e.pos = pos;
  return e;
}

Expr Expr::index(Expr base, Expr idx, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Index;
  e.args.push_back(std::move(base));
  e.args.push_back(std::move(idx));
  e.pos = pos;
  return e;
}

int RecordDecl::field_index(std::string_view field) const {
  for (std::size_t i = 0; i < fields.size(); ++i)
    if (fields[i].name == field) return static_cast<int>(i);
  return -1;
}

const RecordDecl* Program::find_record(std::string_view name) const {
  for (const auto& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

const MethodDecl* Program::find_method(std::string_view name) const {
  for (const auto& m : methods)
    if (m.name == name) return &m;
  return nullptr;
}

const ConstDecl* Program::find_constant(std::string_view name) const {
  for (const auto& c : constants)
    if (c.name == name) return &c;
  return nullptr;
}

bool is_builtin(std::string_view name) {
  return name == "sin" || name == "cos" || name == "atan" || name == "sqrt" || name == "abs";
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Ident, Float, Int, Punct, AnnotStart, AnnotEnd, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) break;
    }
    if (annotation_ != Annot::None)
      throw ParseError(annotation_start_, "unterminated contract comment");
    return out;
  }

 private:
  enum class Annot { None, Block, Line };

  char peek(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }
  SourcePos here() const { return {line_, col_}; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_trivia() {
    for (;;) {
      const char c = peek();
      if (annotation_ == Annot::Line && c == '\n') return;  // line annotation ends here
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (annotation_ == Annot::Block && c == '@' && !(peek(1) == '*' && peek(2) == '/')) {
        advance();
      } else if (annotation_ == Annot::Line && c == '@') {
        advance();
      } else if (annotation_ == Annot::None && c == '/' && peek(1) == '/' && peek(2) != '@') {
        while (peek() != '\n' && peek() != '\0') advance();
      } else if (annotation_ == Annot::None && c == '/' && peek(1) == '*' && peek(2) != '@') {
        const SourcePos start = here();
        advance(2);
        while (!(peek() == '*' && peek(1) == '/')) {
          if (peek() == '\0') throw ParseError(start, "unterminated comment");
          advance();
        }
        advance(2);
      } else {
        return;
      }
    }
  }

  Token next() {
    Token t;
    t.pos = here();
    const char c = peek();
    if (c == '\0') {
      if (annotation_ == Annot::Line) {
        annotation_ = Annot::None;
        t.kind = Tok::AnnotEnd;
        return t;
      }
      t.kind = Tok::End;
      return t;
    }
    if (annotation_ == Annot::Line && c == '\n') {
      advance();
      annotation_ = Annot::None;
      t.kind = Tok::AnnotEnd;
      return t;
    }
    if (annotation_ == Annot::None && c == '/' && peek(1) == '*' && peek(2) == '@') {
      advance(3);
      annotation_ = Annot::Block;
      annotation_start_ = t.pos;
      t.kind = Tok::AnnotStart;
      return t;
    }
    if (annotation_ == Annot::None && c == '/' && peek(1) == '/' && peek(2) == '@') {
      advance(3);
      annotation_ = Annot::Line;
      annotation_start_ = t.pos;
      t.kind = Tok::AnnotStart;
      return t;
    }
    if (annotation_ == Annot::Block && ((c == '@' && peek(1) == '*' && peek(2) == '/') || (c == '*' && peek(1) == '/'))) {
      advance(c == '@' ? 3 : 2);
      annotation_ = Annot::None;
      t.kind = Tok::AnnotEnd;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '\\') {
      t.kind = Tok::Ident;
      t.text.push_back(c);
      advance();
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
        t.text.push_back(peek());
        advance();
      }
      if (t.text == "\\") throw ParseError(t.pos, "stray backslash");
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number(t);
    static const char* const kPuncts[] = {"<==>", "==>", "<=", ">=", "==", "!=", "&&", "||", "(", ")", "{", "}",
                                          "[", "]", ";", ",", ".", "+", "-", "*", "/", "!", "<", ">", "="};
    for (const char* p : kPuncts) {
      const std::string_view ps(p);
      if (src_.substr(pos_, ps.size()) == ps) {
        t.kind = Tok::Punct;
        t.text = ps;
        advance(ps.size());
        return t;
      }
    }
    throw ParseError(t.pos, std::string("unexpected character '") + c + "'");
  }

  Token number(Token t) {
    bool is_float = false;
    auto digits = [&] {
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        t.text.push_back(peek());
        advance();
      }
    };
    digits();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      is_float = true;
      t.text.push_back('.');
      advance();
      digits();
    }
    if (peek() == 'e' || peek() == 'E') {
      const char sign = peek(1);
      const bool has_sign = sign == '+' || sign == '-';
      if (std::isdigit(static_cast<unsigned char>(peek(has_sign ? 2 : 1)))) {
        is_float = true;
        t.text.push_back(peek());
        advance();
        if (has_sign) {
          t.text.push_back(peek());
          advance();
        }
        digits();
      }
    }
    if (peek() == 'f' || peek() == 'F' || peek() == 'd' || peek() == 'D') {
      is_float = true;
      t.text.push_back(peek());
      advance();
    }
    if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')
      throw ParseError(here(), "malformed number literal");
    t.kind = is_float ? Tok::Float : Tok::Int;
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Annot annotation_ = Annot::None;
  SourcePos annotation_start_;
};

// ---------------------------------------------------------------------------
// Parser

const std::set<std::string, std::less<>> kModifiers = {"public", "private", "static", "strictfp", "final"};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    Program p;
    std::set<std::string, std::less<>> names;
    auto declare = [&](const std::string& name, SourcePos pos) {
      if (!names.insert(name).second) throw ParseError(pos, "duplicate declaration of '" + name + "'");
    };
    while (cur().kind != Tok::End) {
      if (is_ident("record")) {
        auto r = record();
        declare(r.name, r.pos);
        p.records.push_back(std::move(r));
      } else if (is_ident("const")) {
        auto c = constant();
        declare(c.name, c.pos);
        p.constants.push_back(std::move(c));
      } else {
        auto m = method();
        declare(m.name, m.pos);
        p.methods.push_back(std::move(m));
      }
    }
    return p;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  const Token& look(std::size_t k) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  bool is_ident(std::string_view s) const { return cur().kind == Tok::Ident && cur().text == s; }
  bool is_punct(std::string_view s) const { return cur().kind == Tok::Punct && cur().text == s; }

  [[noreturn]] void fail(const std::string& what) const {
    std::string got = cur().kind == Tok::End ? "end of input"
                      : cur().kind == Tok::AnnotStart ? "'/*@'"
                      : cur().kind == Tok::AnnotEnd   ? "end of annotation"
                                                      : "'" + cur().text + "'";
    throw ParseError(cur().pos, "expected " + what + ", found " + got);
  }

  Token take() { return toks_[i_++]; }

  void expect_punct(std::string_view s) {
    if (!is_punct(s)) fail("'" + std::string(s) + "'");
    ++i_;
  }

  void expect_ident(std::string_view s) {
    if (!is_ident(s)) fail("'" + std::string(s) + "'");
    ++i_;
  }

  std::string identifier(const char* what) {
    if (cur().kind != Tok::Ident || cur().text.front() == '\\') fail(what);
    return take().text;
  }

  bool starts_type() const {
    if (cur().kind != Tok::Ident) return false;
    const auto& t = cur().text;
    return t == "double" || t == "float" || t == "boolean" || t == "bool" || t == "int";
  }

  Type type() {
    const Token t = cur();
    if (t.kind != Tok::Ident) fail("a type");
    ++i_;
    if (t.text == "double") {
      if (is_punct("[")) {
        ++i_;
        if (cur().kind != Tok::Int) fail("an array length");
        const int len = std::stoi(take().text);
        if (len < 1) throw ParseError(t.pos, "array length must be at least 1");
        expect_punct("]");
        return Type::array_of(len);
      }
      return Type::float64();
    }
    if (t.text == "float") return Type::float32();
    if (t.text == "boolean" || t.text == "bool") return Type::boolean();
    if (t.text == "int") return Type::integer();
    if (t.text.front() == '\\' || kModifiers.contains(t.text)) throw ParseError(t.pos, "expected a type, found '" + t.text + "'");
    return Type::record_of(t.text);
  }

  RecordDecl record() {
    RecordDecl r;
    r.pos = cur().pos;
    expect_ident("record");
    r.name = identifier("a record name");
    expect_punct("{");
    std::set<std::string> fields;
    while (!is_punct("}")) {
      const SourcePos fpos = cur().pos;
      Type t = type();
      for (;;) {
        FieldDecl f{identifier("a field name"), t};
        if (!fields.insert(f.name).second) throw ParseError(fpos, "duplicate field '" + f.name + "' in record " + r.name);
        r.fields.push_back(std::move(f));
        if (!is_punct(",")) break;
        ++i_;
      }
      expect_punct(";");
    }
    expect_punct("}");
    return r;
  }

  ConstDecl constant() {
    ConstDecl c;
    c.pos = cur().pos;
    expect_ident("const");
    c.type = type();
    c.name = identifier("a constant name");
    expect_punct("=");
    c.value = expr();
    expect_punct(";");
    return c;
  }

  // Consecutive annotation comments form one specification; only `also`
  // starts a new case.
  void annotation(std::vector<Contract>& out, Contract& c, bool& any) {
    const SourcePos start = cur().pos;
    ++i_;  // AnnotStart
    if (!any && out.empty()) c.pos = cur().pos;
    auto conj = [](std::optional<Expr>& slot, Expr e) {
      if (!slot) slot = std::move(e);
      else slot = Expr::binary(BinOp::And, std::move(*slot), std::move(e), e.pos);
    };
    while (cur().kind != Tok::AnnotEnd) {
      if (cur().kind == Tok::End) throw ParseError(start, "unterminated contract comment");
      if (is_ident("public") || is_ident("normal_behavior") || is_ident("normal_behaviour")) {
        ++i_;
      } else if (is_ident("also")) {
        ++i_;
        out.push_back(std::move(c));
        c = Contract{};
        c.pos = cur().pos;
        any = false;
      } else if (is_ident("requires")) {
        ++i_;
        conj(c.requires_, expr());
        expect_punct(";");
        any = true;
      } else if (is_ident("ensures")) {
        ++i_;
        conj(c.ensures, expr());
        expect_punct(";");
        any = true;
      } else {
        fail("'requires', 'ensures' or 'also'");
      }
    }
    ++i_;
  }

  MethodDecl method() {
    MethodDecl m;
    Contract c;
    bool any = false;
    while (cur().kind == Tok::AnnotStart) annotation(m.contracts, c, any);
    if (any || !m.contracts.empty()) m.contracts.push_back(std::move(c));
    while (cur().kind == Tok::Ident && kModifiers.contains(cur().text)) ++i_;
    m.pos = cur().pos;
    m.return_type = type();
    m.name = identifier("a method name");
    expect_punct("(");
    std::set<std::string> names;
    if (!is_punct(")")) {
      for (;;) {
        const SourcePos ppos = cur().pos;
        Param p;
        p.type = type();
        p.name = identifier("a parameter name");
        if (!names.insert(p.name).second) throw ParseError(ppos, "duplicate parameter '" + p.name + "'");
        m.params.push_back(std::move(p));
        if (!is_punct(",")) break;
        ++i_;
      }
    }
    expect_punct(")");
    m.body = block();
    for (std::size_t k = 0; k < m.contracts.size(); ++k) m.contracts[k].label = std::to_string(k + 1);
    return m;
  }

  std::vector<Stmt> block() {
    expect_punct("{");
    std::vector<Stmt> out;
    while (!is_punct("}")) {
      if (cur().kind == Tok::End) fail("'}'");
      out.push_back(statement());
    }
    ++i_;
    return out;
  }

  std::vector<Stmt> branch() {
    if (is_punct("{")) return block();
    std::vector<Stmt> out;
    out.push_back(statement());
    return out;
  }

  Stmt statement() {
    Stmt s;
    s.pos = cur().pos;
    if (cur().kind == Tok::AnnotStart) {
      const SourcePos start = cur().pos;
      ++i_;
      if (!is_ident("loop_invariant") && !is_ident("maintaining")) fail("'loop_invariant'");
      ++i_;
      Expr inv = expr();
      expect_punct(";");
      if (cur().kind != Tok::AnnotEnd) {
        if (cur().kind == Tok::End) throw ParseError(start, "unterminated contract comment");
        fail("end of annotation (one loop invariant per loop)");
      }
      ++i_;
      if (!is_ident("while")) fail("'while' after a loop invariant");
      Stmt w = statement();
      w.invariant = std::move(inv);
      return w;
    }
    if (is_punct("{")) {
      s.kind = StmtKind::Block;
      s.body = block();
      return s;
    }
    if (is_ident("if")) {
      ++i_;
      s.kind = StmtKind::If;
      expect_punct("(");
      s.expr = expr();
      expect_punct(")");
      s.body = branch();
      if (is_ident("else")) {
        ++i_;
        s.has_else = true;
        s.else_body = branch();
      }
      return s;
    }
    if (is_ident("while")) {
      ++i_;
      s.kind = StmtKind::While;
      expect_punct("(");
      s.expr = expr();
      expect_punct(")");
      s.body = branch();
      return s;
    }
    if (is_ident("return")) {
      ++i_;
      s.kind = StmtKind::Return;
      s.expr = expr();
      expect_punct(";");
      return s;
    }
    // Declaration: builtin type keyword, or `Name name` for records.
    if (starts_type() || (cur().kind == Tok::Ident && cur().text.front() != '\\' && look(1).kind == Tok::Ident)) {
      s.kind = StmtKind::Decl;
      s.decl_type = type();
      s.name = identifier("a variable name");
      if (is_punct("=")) {
        ++i_;
        s.expr = expr();
      }
      expect_punct(";");
      return s;
    }
    s.kind = StmtKind::Assign;
    Expr target = postfix();
    if (target.kind != ExprKind::Var && target.kind != ExprKind::Field && target.kind != ExprKind::Index)
      throw ParseError(s.pos, "invalid assignment target");
    s.target = std::move(target);
    expect_punct("=");
    s.expr = expr();
    expect_punct(";");
    return s;
  }

  // Expressions, lowest precedence first.
  Expr expr() { return iff(); }

  Expr iff() {
    Expr l = implies();
    while (is_punct("<==>")) {
      const SourcePos p = take().pos;
      l = Expr::binary(BinOp::Iff, std::move(l), implies(), p);
    }
    return l;
  }

  Expr implies() {
    Expr l = disj();
    if (is_punct("==>")) {
      const SourcePos p = take().pos;
      return Expr::binary(BinOp::Implies, std::move(l), implies(), p);
    }
    return l;
  }

  Expr disj() {
    Expr l = conj();
    while (is_punct("||")) {
      const SourcePos p = take().pos;
      l = Expr::binary(BinOp::Or, std::move(l), conj(), p);
    }
    return l;
  }

  Expr conj() {
    Expr l = equality();
    while (is_punct("&&")) {
      const SourcePos p = take().pos;
      l = Expr::binary(BinOp::And, std::move(l), equality(), p);
    }
    return l;
  }

  Expr equality() {
    Expr l = relational();
    while (is_punct("==") || is_punct("!=")) {
      const Token t = take();
      l = Expr::binary(t.text == "==" ? BinOp::Eq : BinOp::Ne, std::move(l), relational(), t.pos);
    }
    return l;
  }

  Expr relational() {
    Expr l = additive();
    while (is_punct("<") || is_punct("<=") || is_punct(">") || is_punct(">=")) {
      const Token t = take();
      const BinOp op = t.text == "<" ? BinOp::Lt : t.text == "<=" ? BinOp::Le : t.text == ">" ? BinOp::Gt : BinOp::Ge;
      l = Expr::binary(op, std::move(l), additive(), t.pos);
    }
    return l;
  }

  Expr additive() {
    Expr l = multiplicative();
    while (is_punct("+") || is_punct("-")) {
      const Token t = take();
      l = Expr::binary(t.text == "+" ? BinOp::Add : BinOp::Sub, std::move(l), multiplicative(), t.pos);
    }
    return l;
  }

  Expr multiplicative() {
    Expr l = unary();
    while (is_punct("*") || is_punct("/")) {
      const Token t = take();
      l = Expr::binary(t.text == "*" ? BinOp::Mul : BinOp::Div, std::move(l), unary(), t.pos);
    }
    return l;
  }

  Expr unary() {
    if (is_punct("-")) {
      const SourcePos p = take().pos;
      return Expr::unary(UnOp::Neg, unary(), p);
    }
    if (is_punct("!")) {
      const SourcePos p = take().pos;
      return Expr::unary(UnOp::Not, unary(), p);
    }
    return postfix();
  }

  std::vector<Expr> arguments() {
    expect_punct("(");
    std::vector<Expr> args;
    if (!is_punct(")")) {
      for (;;) {
        args.push_back(expr());
        if (!is_punct(",")) break;
        ++i_;
      }
    }
    expect_punct(")");
    return args;
  }

  Expr postfix() {
    Expr e = primary();
    for (;;) {
      if (is_punct(".")) {
        const SourcePos p = take().pos;
        std::string f = identifier("a field name");
        if (f == "length") {
          Expr len;
          len.kind = ExprKind::Length;
          len.pos = p;
          len.args.push_back(std::move(e));
          e = std::move(len);
        } else {
          e = Expr::field(std::move(e), std::move(f), p);
        }
      } else if (is_punct("[")) {
        const SourcePos p = take().pos;
        Expr idx = expr();
        expect_punct("]");
        e = Expr::index(std::move(e), std::move(idx), p);
      } else {
        return e;
      }
    }
  }

  Expr primary() {
    const Token t = cur();
    switch (t.kind) {
      case Tok::Float: {
        ++i_;
        std::string text = t.text;
        bool single = false;
        const char last = text.back();
        if (last == 'f' || last == 'F') single = true;
        if (last == 'f' || last == 'F' || last == 'd' || last == 'D') text.pop_back();
        return Expr::float_lit(text, single, t.pos);
      }
      case Tok::Int: {
        ++i_;
        try {
          return Expr::int_lit(std::stoll(t.text), t.pos);
        } catch (const std::out_of_range&) {
          throw ParseError(t.pos, "integer literal out of range");
        }
      }
      case Tok::Punct:
        if (t.text == "(") {
          ++i_;
          if (is_ident("\\forall")) {
            Expr q = quantifier();
            expect_punct(")");
            return q;
          }
          Expr e = expr();
          expect_punct(")");
          return e;
        }
        fail("an expression");
      case Tok::Ident: break;
      default: fail("an expression");
    }
    if (t.text == "true" || t.text == "false") {
      ++i_;
      return Expr::bool_lit(t.text == "true", t.pos);
    }
    if (t.text == "\\result") {
      ++i_;
      Expr e;
      e.kind = ExprKind::Result;
      e.pos = t.pos;
      return e;
    }
    if (t.text == "\\forall") return quantifier();
    if (t.text == "new") return allocation();
    if (t.text == "Math" && look(1).kind == Tok::Punct && look(1).text == ".") {
      i_ += 2;
      const Token m = cur();
      std::string name = identifier("a Math member");
      if (is_punct("(")) return Expr::call(std::move(name), arguments(), m.pos);
      return Expr::var(std::move(name), m.pos);
    }
    ++i_;
    std::string name = t.text;
    if (name.front() == '\\') {
      name.erase(0, 1);
      if (!is_punct("(")) throw ParseError(t.pos, "unknown specification keyword '" + t.text + "'");
    }
    if (is_punct("(")) return Expr::call(std::move(name), arguments(), t.pos);
    if (kModifiers.contains(name) || name == "if" || name == "while" || name == "return" || name == "else")
      throw ParseError(t.pos, "unexpected keyword '" + name + "'");
    return Expr::var(std::move(name), t.pos);
  }

  Expr quantifier() {
    Expr q;
    q.kind = ExprKind::Forall;
    q.pos = cur().pos;
    ++i_;
    expect_ident("int");
    q.name = identifier("a quantified variable");
    expect_punct(";");
    Expr range = expr();
    expect_punct(";");
    Expr body = expr();
    q.args.push_back(std::move(range));
    q.args.push_back(std::move(body));
    return q;
  }

  Expr allocation() {
    const SourcePos p = cur().pos;
    ++i_;
    if (is_ident("double")) {
      ++i_;
      expect_punct("[");
      expect_punct("]");
      expect_punct("{");
      Expr e;
      e.kind = ExprKind::NewArray;
      e.pos = p;
      if (!is_punct("}")) {
        for (;;) {
          e.args.push_back(expr());
          if (!is_punct(",")) break;
          ++i_;
        }
      }
      expect_punct("}");
      if (e.args.empty()) throw ParseError(p, "array literal needs at least one element");
      return e;
    }
    Expr e;
    e.kind = ExprKind::NewRecord;
    e.pos = p;
    e.name = identifier("a record name");
    e.args = arguments();
    return e;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

int precedence(const Expr& e) {
  if (e.kind == ExprKind::Unary) return 9;
  if (e.kind != ExprKind::Binary) return 10;
  switch (e.binop) {
    case BinOp::Iff: return 1;
    case BinOp::Implies: return 2;
    case BinOp::Or: return 3;
    case BinOp::And: return 4;
    case BinOp::Eq:
    case BinOp::Ne: return 5;
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 6;
    case BinOp::Add:
    case BinOp::Sub: return 7;
    case BinOp::Mul:
    case BinOp::Div: return 8;
  }
  return 10;
}

void print_e(const Expr& e, std::ostream& os);

void print_operand(const Expr& child, int parent_prec, bool needs_strict, std::ostream& os) {
  const int p = precedence(child);
  const bool paren = p < parent_prec || (needs_strict && p == parent_prec);
  if (paren) os << '(';
  print_e(child, os);
  if (paren) os << ')';
}

void print_list(const std::vector<Expr>& args, std::ostream& os) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) os << ", ";
    print_e(args[i], os);
  }
}

void print_e(const Expr& e, std::ostream& os) {
  switch (e.kind) {
    case ExprKind::FloatLit: os << e.text << (e.single ? "f" : ""); return;
    case ExprKind::IntLit: os << e.ival; return;
    case ExprKind::BoolLit: os << (e.ival ? "true" : "false"); return;
    case ExprKind::Var: os << e.name; return;
    case ExprKind::Result: os << "\\result"; return;
    case ExprKind::Field:
      print_operand(e.args[0], 10, false, os);
      os << '.' << e.name;
      return;
    case ExprKind::Length:
      print_operand(e.args[0], 10, false, os);
      os << ".length";
      return;
    case ExprKind::Index:
      print_operand(e.args[0], 10, false, os);
      os << '[';
      print_e(e.args[1], os);
      os << ']';
      return;
    case ExprKind::Unary:
      os << (e.unop == UnOp::Neg ? "-" : "!");
      print_operand(e.args[0], 9, false, os);
      return;
    case ExprKind::Binary: {
      const int p = precedence(e);
      const bool right_assoc = e.binop == BinOp::Implies;
      print_operand(e.args[0], p, right_assoc, os);
      os << ' ' << binop_text(e.binop) << ' ';
      print_operand(e.args[1], p, !right_assoc, os);
      return;
    }
    case ExprKind::Call:
      os << e.name << '(';
      print_list(e.args, os);
      os << ')';
      return;
    case ExprKind::Forall:
      os << "(\\forall int " << e.name << "; ";
      print_e(e.args[0], os);
      os << "; ";
      print_e(e.args[1], os);
      os << ')';
      return;
    case ExprKind::NewRecord:
      os << "new " << e.name << '(';
      print_list(e.args, os);
      os << ')';
      return;
    case ExprKind::NewArray:
      os << "new double[]{";
      print_list(e.args, os);
      os << '}';
      return;
  }
}

void print_stmts(const std::vector<Stmt>& stmts, int indent, std::ostream& os);

void print_stmt(const Stmt& s, int indent, std::ostream& os) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  switch (s.kind) {
    case StmtKind::Decl:
      os << pad << s.decl_type.str() << ' ' << s.name;
      if (s.expr) {
        os << " = ";
        print_e(*s.expr, os);
      }
      os << ";\n";
      return;
    case StmtKind::Assign:
      os << pad;
      print_e(*s.target, os);
      os << " = ";
      print_e(*s.expr, os);
      os << ";\n";
      return;
    case StmtKind::Block:
      os << pad << "{\n";
      print_stmts(s.body, indent + 2, os);
      os << pad << "}\n";
      return;
    case StmtKind::If:
      os << pad << "if (";
      print_e(*s.expr, os);
      os << ") {\n";
      print_stmts(s.body, indent + 2, os);
      os << pad << '}';
      if (s.has_else) {
        os << " else {\n";
        print_stmts(s.else_body, indent + 2, os);
        os << pad << '}';
      }
      os << '\n';
      return;
    case StmtKind::While:
      if (s.invariant) {
        os << pad << "/*@ loop_invariant ";
        print_e(*s.invariant, os);
        os << "; @*/\n";
      }
      os << pad << "while (";
      print_e(*s.expr, os);
      os << ") {\n";
      print_stmts(s.body, indent + 2, os);
      os << pad << "}\n";
      return;
    case StmtKind::Return:
      os << pad << "return ";
      print_e(*s.expr, os);
      os << ";\n";
      return;
  }
}

void print_stmts(const std::vector<Stmt>& stmts, int indent, std::ostream& os) {
  for (const auto& s : stmts) print_stmt(s, indent, os);
}

}  // namespace

Program parse_program(std::string_view source) {
  Lexer lexer(source);
  Parser parser(lexer.run());
  return parser.program();
}

Program parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_program(ss.str());
  } catch (const ParseError& e) {
    std::vector<Diagnostic> diags = e.diagnostics();
    for (auto& d : diags) d.message = path + ": " + d.message;
    throw ParseError(std::move(diags));
  }
}

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  print_e(e, os);
  return os.str();
}

std::string print_type(const Type& t) { return t.str(); }

std::string print_program(const Program& p) {
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << '\n';
    first = false;
  };
  for (const auto& r : p.records) {
    sep();
    os << "record " << r.name << " {\n";
    for (const auto& f : r.fields) os << "  " << f.type.str() << ' ' << f.name << ";\n";
    os << "}\n";
  }
  if (!p.constants.empty()) {
    sep();
    for (const auto& c : p.constants) {
      os << "const " << c.type.str() << ' ' << c.name << " = ";
      print_e(c.value, os);
      os << ";\n";
    }
  }
  for (const auto& m : p.methods) {
    sep();
    if (!m.contracts.empty()) {
      os << "/*@";
      for (std::size_t k = 0; k < m.contracts.size(); ++k) {
        const auto& c = m.contracts[k];
        if (k) os << "  @ also\n  @";
        if (c.requires_) {
          os << " requires ";
          print_e(*c.requires_, os);
          os << ";\n  @";
        }
        if (c.ensures) {
          os << " ensures ";
          print_e(*c.ensures, os);
          os << ";\n  @";
        }
        if (!c.requires_ && !c.ensures) os << " requires true;\n  @";
      }
      os << "*/\n";
    }
    os << m.return_type.str() << ' ' << m.name << '(';
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      if (i) os << ", ";
      os << m.params[i].type.str() << ' ' << m.params[i].name;
    }
    os << ") {\n";
    print_stmts(m.body, 2, os);
    os << "}\n";
  }
  return os.str();
}

}  // namespace floatdv::minif
