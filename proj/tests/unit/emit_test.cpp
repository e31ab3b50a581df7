#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <regex>

#include "floatdv/bench.hpp"
#include "floatdv/parser.hpp"
#include "floatdv/smt_emit.hpp"
#include "floatdv/typecheck.hpp"

using namespace floatdv;
namespace t = floatdv::term;

namespace {

FpLiteral random_literal(std::mt19937_64& rng) {
  const Sort s = rng() % 2 ? Sort::Float64 : Sort::Float32;
  const std::uint64_t mask = s == Sort::Float64 ? ~0ull : 0xffffffffull;
  switch (rng() % 8) {
    case 0: return FpLiteral::nan(s);
    case 1: return FpLiteral::infinity(s, rng() % 2);
    case 2: return FpLiteral::zero(s, rng() % 2);
    case 3: return FpLiteral::from_fields(s, rng() % 2, 0, (rng() & mask) >> (exponent_bits(s) + 1) | 1);  // subnormal
    default: return FpLiteral::from_bits(s, rng() & mask);
  }
}

std::vector<ProofObligation> corpus_obligations() {
  const Corpus c = load_corpus(std::string(FLOATDV_SOURCE_DIR) + "/corpus/manifest.json");
  std::vector<ProofObligation> out;
  for (const auto& b : c.cases) {
    const auto tp = minif::typecheck(minif::parse_file(b.file));
    for (auto& po : generate_obligations(tp, b.method, b.contract - 1)) out.push_back(std::move(po));
  }
  return out;
}

}  // namespace

TEST(Emit, LiteralRoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const FpLiteral lit = random_literal(rng);
    const std::string text = format_fp_literal(lit);
    EXPECT_EQ(parse_fp_literal(text), lit) << text;
  }
}

TEST(Emit, LiteralSpellings) {
  EXPECT_EQ(format_fp_literal(FpLiteral::from_double(1.0)), "(fp #b0 #b01111111111 #b" + std::string(52, '0') + ")");
  EXPECT_EQ(format_fp_literal(FpLiteral::nan(Sort::Float64)), "(_ NaN 11 53)");
  EXPECT_EQ(format_fp_literal(FpLiteral::infinity(Sort::Float32, true)), "(_ -oo 8 24)");
  EXPECT_EQ(parse_fp_literal("(_ +zero 11 53)"), FpLiteral::zero(Sort::Float64, false));
  EXPECT_EQ(parse_fp_literal("(_ -zero 8 24)"), FpLiteral::zero(Sort::Float32, true));
  EXPECT_EQ(parse_fp_literal("(fp #b0 #b01111111111 #x0000000000000)"), FpLiteral::from_double(1.0));
  EXPECT_EQ(parse_fp_literal("(_ +oo 11 53)"), FpLiteral::infinity(Sort::Float64, false));
  EXPECT_THROW(parse_fp_literal("(fp #b0 #b1)"), LiteralError);
  EXPECT_THROW(parse_fp_literal("1.0"), LiteralError);
}

TEST(Emit, LogicFollowsContent) {
  ProofObligation po;
  po.name = "post1";
  const Term x = t::var("x", Sort::Float64);
  po.goal = t::fp_leq(x, t::fp_double(1.0));
  po.hypotheses = {t::fp_leq(x, t::fp_double(0.5))};
  EXPECT_EQ(emit_smt(po).logic, "QF_FP");

  po.goal = t::fp_leq(t::apply(Fn::Sin, x), t::fp_double(1.0));
  po.occurrences = collect_occurrences({po.goal});
  const SmtDocument ground = emit_smt(po);
  EXPECT_EQ(ground.logic, "ALL");
  EXPECT_FALSE(ground.hasQuantifiers);

  EmitOptions q;
  q.transMode = TransMode::SmtAxioms;
  EXPECT_TRUE(emit_smt(po, q).hasQuantifiers);
  q.logic = "QF_UFFP";
  EXPECT_NE(emit_smt(po, q).text.find("(set-logic QF_UFFP)"), std::string::npos);
}

TEST(Emit, SqrtModes) {
  ProofObligation po;
  po.name = "post1";
  const Term x = t::var("x", Sort::Float64);
  po.goal = t::not_(t::is_nan(t::apply(Fn::Sqrt, x)));
  po.occurrences = collect_occurrences({po.goal});
  EmitOptions o;
  EXPECT_NE(emit_smt(po, o).text.find("fp.sqrt RNE"), std::string::npos);
  o.sqrtMode = SqrtMode::Axioms;
  const std::string ax = emit_smt(po, o).text;
  EXPECT_EQ(ax.find("fp.sqrt"), std::string::npos);
  EXPECT_NE(ax.find("(declare-fun sqrtDouble (Float64) Float64)"), std::string::npos);
}

TEST(Emit, DeclaredSymbolsAreTheObligationConstants) {
  ProofObligation po;
  po.name = "post1";
  po.goal = t::fp_lt(t::var("r.f", Sort::Float64), t::var("a[0]", Sort::Float64));
  const SmtDocument d = emit_smt(po);
  EXPECT_EQ(d.declaredSymbols, (std::vector<std::string>{"a[0]", "r.f"}));
  EXPECT_NE(d.text.find("(declare-fun |r.f| () Float64)"), std::string::npos);
  EXPECT_EQ(smt_symbol("x"), "|x|");
}

TEST(Emit, BackgroundQuantifiersAddTheObjectTheory) {
  ProofObligation po;
  po.name = "post1";
  po.goal = t::boolean(true);
  EmitOptions o;
  o.backgroundQuantifiers = true;
  const SmtDocument d = emit_smt(po, o);
  EXPECT_TRUE(d.hasQuantifiers);
  EXPECT_EQ(d.logic, "ALL");
  EXPECT_NE(d.text.find("forall"), std::string::npos);
}

// Full corpus: ground instantiation without background theory is quantifier free.
TEST(Emit, GroundModeNeverQuantifies) {
  const auto all = corpus_obligations();
  ASSERT_GT(all.size(), 50u);
  const std::regex forall_token(R"(\bforall\b)");
  for (SqrtMode sm : {SqrtMode::Builtin, SqrtMode::Axioms}) {
    EmitOptions o;
    o.sqrtMode = sm;
    for (const auto& po : all) {
      const SmtDocument d = emit_smt(po, o);
      EXPECT_FALSE(std::regex_search(d.text, forall_token)) << po.provenance.method << " " << po.name;
      EXPECT_FALSE(d.hasQuantifiers);
    }
  }
}

TEST(Emit, EmissionIsDeterministic) {
  const auto all = corpus_obligations();
  for (std::size_t i = 0; i < all.size(); i += 7) EXPECT_EQ(emit_smt(all[i]).text, emit_smt(all[i]).text);
}
