#include <gtest/gtest.h>

#include "floatdv/parser.hpp"

using namespace floatdv::minif;

namespace {

const char* kComplex = R"(
record Complex { double re, im; }

const double ZERO = 0.0;

/*@ public normal_behavior
  @ requires !fp_nan(a.re) && !fp_nan(a.im);
  @ ensures !\fp_nan(\result.re);
  @ also
  @ requires fp_nice(a.re);
  @ ensures fp_nice(\result.re);
  @*/
Complex add(Complex a, Complex b) {
  // plain comment
  Complex r = new Complex(a.re + b.re, a.im + b.im);
  return r;
}

//@ requires x > -1.0 && x < 1.0f == false;
static strictfp double f(double x) {
  double s = x;
  /*@ loop_invariant s >= 1.0 ==> x < 2.0 ==> true; @*/
  while (s < 10.0) s = s + Math.sqrt(x);
  if (s > 1.0) { s = -s; } else s = s * 2.0e-3;
  return s;
}
)";

}  // namespace

TEST(Parser, ParsesContractsAndBodies) {
  const Program p = parse_program(kComplex);
  ASSERT_EQ(p.records.size(), 1u);
  EXPECT_EQ(p.records[0].fields.size(), 2u);
  EXPECT_EQ(p.records[0].field_index("im"), 1);
  ASSERT_EQ(p.methods.size(), 2u);
  const MethodDecl& add = p.methods[0];
  ASSERT_EQ(add.contracts.size(), 2u);
  EXPECT_EQ(add.contracts[1].label, "2");
  EXPECT_EQ(print_expr(*add.contracts[0].ensures), "!fp_nan(\\result.re)");
  const MethodDecl& f = p.methods[1];
  ASSERT_EQ(f.contracts.size(), 1u);
  EXPECT_FALSE(f.contracts[0].ensures);
  EXPECT_EQ(f.body[1].kind, StmtKind::While);
  ASSERT_TRUE(f.body[1].invariant);
  // ==> is right-associative.
  EXPECT_EQ(f.body[1].invariant->args[1].kind, ExprKind::Binary);
  EXPECT_EQ(f.body[1].invariant->args[1].binop, BinOp::Implies);
  // Math.sqrt maps to the builtin.
  EXPECT_EQ(f.body[1].body[0].expr->args[1].name, "sqrt");
}

TEST(Parser, PrintedProgramIsAFixpoint) {
  const std::string once = print_program(parse_program(kComplex));
  const std::string twice = print_program(parse_program(once));
  EXPECT_EQ(once, twice);
}

TEST(Parser, PrecedenceSurvivesPrinting) {
  const Program p = parse_program("double g(double a, double b) { return (a - b) - (a - b) * (a / (b / a)); }");
  EXPECT_EQ(print_expr(*p.methods[0].body[0].expr), "a - b - (a - b) * (a / (b / a))");
  const Program q = parse_program("boolean h(boolean a, boolean b) { return (a ==> b) ==> a; }");
  EXPECT_EQ(print_expr(*q.methods[0].body[0].expr), "(a ==> b) ==> a");
}

TEST(Parser, FloatLiteralSuffixes) {
  const Program p = parse_program("float k() { return 1.5f + 2f; }");
  const Expr& e = *p.methods[0].body[0].expr;
  EXPECT_TRUE(e.args[0].single);
  EXPECT_EQ(e.args[0].text, "1.5");
  EXPECT_EQ(e.args[1].kind, ExprKind::FloatLit);
  EXPECT_EQ(e.args[1].text, "2");
}

TEST(Parser, ForallAndArrays) {
  const Program p = parse_program(R"(
/*@ requires vec.length == 2 && (\forall int i; 0 <= i && i < vec.length; fp_nice(vec[i]));
  @ ensures true; @*/
double r(double[2] vec) { double[2] w = new double[]{vec[1], vec[0]}; return w[0]; }
)");
  const Expr& req = *p.methods[0].contracts[0].requires_;
  EXPECT_EQ(req.args[1].kind, ExprKind::Forall);
  EXPECT_EQ(req.args[1].name, "i");
  EXPECT_EQ(p.methods[0].params[0].type, Type::array_of(2));
}

TEST(Parser, ErrorsCarryPositions) {
  try {
    parse_program("double f() {\n  return 1.0 +;\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    ASSERT_EQ(e.diagnostics().size(), 1u);
    EXPECT_EQ(e.diagnostics()[0].pos.line, 2);
    EXPECT_EQ(e.diagnostics()[0].pos.column, 15);
  }
}

TEST(Parser, RejectsDuplicatesAndUnterminatedAnnotations) {
  EXPECT_THROW(parse_program("double f() { return 1.0; } double f() { return 2.0; }"), ParseError);
  EXPECT_THROW(parse_program("record R { double a; double a; }"), ParseError);
  EXPECT_THROW(parse_program("double f(double x, double x) { return x; }"), ParseError);
  EXPECT_THROW(parse_program("/*@ requires true;\n double f() { return 1.0; }"), ParseError);
  EXPECT_THROW(parse_program("double f() { return 1.0 }"), ParseError);
}
