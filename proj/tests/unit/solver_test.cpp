#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "floatdv/process.hpp"
#include "floatdv/solver.hpp"

using namespace floatdv;
namespace fs = std::filesystem;
namespace t = floatdv::term;

namespace {

SmtDocument doc_for(std::vector<std::string> symbols) {
  SmtDocument d;
  d.goalName = "post1";
  d.declaredSymbols = std::move(symbols);
  return d;
}

SolverConfig cfg(const std::string& name, double timeout = 10) {
  SolverConfig c;
  c.name = name;
  c.path = "/bin/sh";
  c.timeoutSeconds = timeout;
  return c;
}

Verdict verdict(Outcome o, std::optional<ReplayStatus> r = std::nullopt) {
  Verdict v;
  v.outcome = o;
  v.replay = r;
  return v;
}

// A fake solver: a shell script printing `output`.
SolverConfig script_solver(const std::string& name, const std::string& output) {
  const fs::path dir = fs::temp_directory_path() / "floatdv-fake-solvers";
  fs::create_directories(dir);
  const fs::path script = dir / name;
  std::ofstream(script) << "#!/bin/sh\ncat <<'EOF'\n" << output << "\nEOF\n";
  fs::permissions(script, fs::perms::owner_all);
  SolverConfig c;
  c.name = name;
  c.path = script.string();
  c.args = {"{file}"};
  c.timeoutSeconds = 5;
  return c;
}

const char* kZ3Model = R"((
  (define-fun |a.re| () Float64
    (fp #b0 #b11111111110 #xfffffffffffff))
  (define-fun |n| () Int
    (- 3))
  (define-fun |flag| () Bool
    true)
  (define-fun |$t1| () Float64
    (_ +oo 11 53))
  (define-fun sinDouble ((x!0 Float64)) Float64
    (ite (= x!0 (fp #b0 #b01111111111 #x0000000000000)) (fp #b0 #b01111111110 #x0000000000000)
      (_ NaN 11 53)))
))";

const char* kCvc5Model = R"((
(define-fun |a.re| () (_ FloatingPoint 11 53) (fp #b0 #b11111111110 #b1111111111111111111111111111111111111111111111111111))
(define-fun n () Int (- 3))
(define-fun flag () Bool true)
(define-fun sinDouble ((_arg_1 (_ FloatingPoint 11 53))) (_ FloatingPoint 11 53) (ite (= (fp #b0 #b01111111111 #b0000000000000000000000000000000000000000000000000000) _arg_1) (fp #b0 #b01111111110 #b0000000000000000000000000000000000000000000000000000) (_ +zero 11 53)))
))";

}  // namespace

TEST(Model, Z3AndCvc5SpellingsAgree) {
  const std::vector<std::string> declared = {"a.re", "n", "flag"};
  const Model z = parse_model(kZ3Model, &declared);
  const Model c = parse_model(kCvc5Model, &declared);
  const FpLiteral max = FpLiteral::from_double(1.7976931348623157e308);
  EXPECT_EQ(std::get<FpLiteral>(z.values.at("a.re")), max);
  EXPECT_EQ(z.values, c.values);
  EXPECT_EQ(std::get<std::int64_t>(z.values.at("n")), -3);
  EXPECT_TRUE(std::get<bool>(z.values.at("flag")));
  EXPECT_FALSE(z.values.count("$t1"));

  const FunctionTable& zs = z.functions.at("sinDouble");
  const FunctionTable& cs = c.functions.at("sinDouble");
  ASSERT_EQ(zs.points.size(), 1u);
  EXPECT_EQ(zs.points, cs.points);
  EXPECT_EQ(zs.points[0].first, FpLiteral::from_double(1.0));
  EXPECT_EQ(zs.points[0].second, FpLiteral::from_double(0.5));
  EXPECT_TRUE(zs.otherwise->is_nan());
  EXPECT_EQ(*cs.otherwise, FpLiteral::zero(Sort::Float64, false));
}

TEST(Model, GetValueAndBareModel) {
  const Model m = parse_model("((|x| (fp #b1 #b00000000000 #b0000000000000000000000000000000000000000000000000001)) (y (_ -zero 11 53)))");
  EXPECT_EQ(std::get<FpLiteral>(m.values.at("x")), FpLiteral::from_bits(Sort::Float64, 0x8000000000000001ull));
  EXPECT_EQ(std::get<FpLiteral>(m.values.at("y")), FpLiteral::zero(Sort::Float64, true));
  const Model old = parse_model("(model (define-fun x () Float32 (fp #b0 #b01111111 #b00000000000000000000000)))");
  EXPECT_EQ(std::get<FpLiteral>(old.values.at("x")), FpLiteral::from_float(1.0f));
}

TEST(Model, MalformedInputThrows) {
  EXPECT_THROW(parse_model("((define-fun x () Float64 (fp #b0 #b1"), ModelError);
  EXPECT_THROW(parse_model("((define-fun x () Float64 (fp.add RNE y y)))"), ModelError);
}

TEST(Classify, Verdicts) {
  const SmtDocument d = doc_for({"x"});
  const SolverConfig c = cfg("s", 10);
  EXPECT_EQ(classify_output(d, c, "unsat\n(error \"model is not available\")\n", "", 1, 0.1).outcome, Outcome::Valid);
  EXPECT_EQ(classify_output(d, c, "unknown\n", "", 0, 1).outcome, Outcome::Unknown);
  EXPECT_EQ(classify_output(d, c, "unknown\n", "", 0, 9.6).outcome, Outcome::Timeout);
  EXPECT_EQ(classify_output(d, c, "timeout\n", "", 0, 1).outcome, Outcome::Timeout);
  const Verdict e = classify_output(d, c, "(error \"line 3: unknown constant\")\n", "", 1, 0.1);
  EXPECT_EQ(e.outcome, Outcome::Error);
  EXPECT_NE(e.message.find("unknown constant"), std::string::npos);
  EXPECT_EQ(classify_output(d, c, "", "segfault", 139, 0.1).outcome, Outcome::Error);

  const Verdict sat = classify_output(d, c, "sat\n((define-fun x () Float64 (_ NaN 11 53)))\n", "", 0, 0.2);
  EXPECT_EQ(sat.outcome, Outcome::Invalid);
  ASSERT_TRUE(sat.model);
  EXPECT_TRUE(std::get<FpLiteral>(sat.model->values.at("x")).is_nan());

  const Verdict bad = classify_output(d, c, "sat\n((define-fun x () Float64 (fp #b0\n", "", 0, 0.2);
  EXPECT_EQ(bad.outcome, Outcome::Invalid);
  EXPECT_FALSE(bad.model);
  EXPECT_FALSE(bad.message.empty());
}

TEST(Aggregate, Precedence) {
  using O = Outcome;
  EXPECT_EQ(aggregate({verdict(O::Valid), verdict(O::Timeout)}), Aggregate::Valid);
  EXPECT_EQ(aggregate({verdict(O::Valid), verdict(O::Invalid, ReplayStatus::Confirmed)}), Aggregate::Conflict);
  EXPECT_EQ(aggregate({verdict(O::Valid), verdict(O::Invalid, ReplayStatus::Spurious)}), Aggregate::Valid);
  EXPECT_EQ(aggregate({verdict(O::Invalid, ReplayStatus::Inconclusive), verdict(O::Invalid, ReplayStatus::Confirmed)}),
            Aggregate::Refuted);
  EXPECT_EQ(aggregate({verdict(O::Invalid), verdict(O::Timeout)}), Aggregate::Invalid);
  EXPECT_EQ(aggregate({verdict(O::Unknown), verdict(O::Timeout)}), Aggregate::Timeout);
  EXPECT_EQ(aggregate({verdict(O::Unknown), verdict(O::Error)}), Aggregate::Unknown);
  EXPECT_EQ(aggregate({verdict(O::Skipped), verdict(O::Error)}), Aggregate::Error);
  EXPECT_EQ(aggregate({verdict(O::Skipped)}), Aggregate::Skipped);
  EXPECT_EQ(aggregate({}), Aggregate::Skipped);
}

TEST(Aggregate, OrderIndependent) {
  std::mt19937_64 rng(5);
  const std::vector<Verdict> pool = {verdict(Outcome::Valid),
                                     verdict(Outcome::Invalid),
                                     verdict(Outcome::Invalid, ReplayStatus::Confirmed),
                                     verdict(Outcome::Invalid, ReplayStatus::Spurious),
                                     verdict(Outcome::Unknown),
                                     verdict(Outcome::Timeout),
                                     verdict(Outcome::Skipped),
                                     verdict(Outcome::Error)};
  for (int i = 0; i < 2000; ++i) {
    std::vector<Verdict> vs;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < n; ++k) vs.push_back(pool[rng() % pool.size()]);
    const Aggregate first = aggregate(vs);
    std::shuffle(vs.begin(), vs.end(), rng);
    EXPECT_EQ(aggregate(vs), first);
  }
}

TEST(Process, CapturesOutputAndExitCode) {
  const ProcessResult r = run_process({"/bin/sh", "-c", "echo out; echo err >&2; exit 3"}, 5);
  EXPECT_FALSE(r.timedOut);
  EXPECT_EQ(r.exitCode, 3);
  EXPECT_EQ(r.out, "out\n");
  EXPECT_EQ(r.err, "err\n");
}

TEST(Process, KillsTheWholeGroupOnTimeout) {
  const ProcessResult r = run_process({"/bin/sh", "-c", "sleep 30 & sleep 30; echo late"}, 0.5);
  EXPECT_TRUE(r.timedOut);
  EXPECT_LT(r.seconds, 5);
  EXPECT_EQ(r.out.find("late"), std::string::npos);
}

TEST(Process, MissingExecutable) {
  const ProcessResult r = run_process({"/nonexistent/solver"}, 1);
  EXPECT_TRUE(r.startFailed);
  EXPECT_TRUE(find_executable("/nonexistent/solver").empty());
  EXPECT_FALSE(find_executable("sh").empty());
}

TEST(Runner, FakeSolversThroughDecide) {
  ProofObligation po;
  po.name = "post1";
  const Term x = t::var("x", Sort::Float64);
  po.goal = t::fp_eq(x, x);
  const SolverConfig refuter = script_solver("refuter", "sat\n((define-fun |x| () Float64 (_ NaN 11 53)))");
  const SolverConfig prover = script_solver("prover", "unsat");
  int replays = 0;
  const ReplayHook hook = [&](const Model& m) {
    ++replays;
    EXPECT_TRUE(std::get<FpLiteral>(m.values.at("x")).is_nan());
    return std::pair{ReplayStatus::Confirmed, std::string("violated")};
  };
  const AggregatedVerdict a = decide(po, {refuter}, {}, hook);
  EXPECT_EQ(a.outcome, Aggregate::Refuted);
  EXPECT_EQ(replays, 1);
  EXPECT_EQ(decide(po, {prover, refuter}, {}, hook, true).outcome, Aggregate::Conflict);
  EXPECT_EQ(decide(po, {prover}, {}).outcome, Aggregate::Valid);
}

TEST(Runner, HangingSolverTimesOut) {
  SolverConfig c = script_solver("hang", "");
  std::ofstream(c.path) << "#!/bin/sh\nsleep 30\n";
  c.timeoutSeconds = 0.3;
  ProofObligation po;
  po.name = "post1";
  po.goal = t::boolean(true);
  RunOptions run;
  run.graceSeconds = 0.2;
  const Verdict v = run_solver(emit_smt(po), c, run);
  EXPECT_EQ(v.outcome, Outcome::Timeout);
  EXPECT_LT(v.wallTimeSeconds, 3);
}

TEST(Runner, QuantifiedQueriesSkipSolversWithoutSupport) {
  SolverConfig c = script_solver("noquant", "unsat");
  c.supportsQuantifiers = false;
  ProofObligation po;
  po.name = "post1";
  po.goal = t::boolean(true);
  EmitOptions o;
  o.backgroundQuantifiers = true;
  EXPECT_EQ(run_solver(emit_smt(po, o), c).outcome, Outcome::Skipped);
  EXPECT_EQ(run_solver(emit_smt(po), c).outcome, Outcome::Valid);
}

TEST(Config, LoadsAndResolvesRelativePaths) {
  const fs::path dir = fs::temp_directory_path() / "floatdv-config-test";
  fs::create_directories(dir / "bin");
  std::ofstream(dir / "solvers.json") << R"({"solvers": [
    {"name": "local", "path": "bin/solver", "args": ["{file}", "-t:{timeout_ms}"], "supportsQuantifiers": false, "timeoutSeconds": 7},
    {"name": "z3", "path": "z3"}
  ]})";
  const auto cfgs = load_solver_configs((dir / "solvers.json").string());
  ASSERT_EQ(cfgs.size(), 2u);
  EXPECT_EQ(cfgs[0].path, (dir / "bin/solver").string());
  EXPECT_FALSE(cfgs[0].supportsQuantifiers);
  EXPECT_EQ(cfgs[0].timeoutSeconds, 7);
  EXPECT_EQ(cfgs[1].path, "z3");
  EXPECT_EQ(resolve_solver_configs((dir / "solvers.json").string()).size(), 2u);

  std::ofstream(dir / "bad.json") << R"({"solvers": [{"path": "z3"}]})";
  EXPECT_THROW(load_solver_configs((dir / "bad.json").string()), ConfigError);
  EXPECT_THROW(load_solver_configs((dir / "missing.json").string()), ConfigError);
}

TEST(Config, DefaultsNameTheThreeSolvers) {
  const auto d = default_solver_configs();
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[0].name, "z3");
  EXPECT_EQ(d[1].name, "cvc5");
  EXPECT_EQ(d[2].name, "mathsat");
}
