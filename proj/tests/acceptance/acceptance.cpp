// Acceptance checks 1-10. One PASS/FAIL line per criterion on stdout;
// per-contract details go to stderr.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "../golden/golden_cases.hpp"
#include "floatdv/axioms.hpp"
#include "floatdv/bench.hpp"
#include "floatdv/interpreter.hpp"
#include "floatdv/parser.hpp"
#include "floatdv/smt_emit.hpp"
#include "floatdv/typecheck.hpp"

using namespace floatdv;

namespace {

// Pinned tolerances.
constexpr double kGoalTimeout = 300;        // criteria 1-3
constexpr double kExtendedTimeout = 1800;   // Matrix3.transposedEq in criterion 2
constexpr double kModeTimeout = 60;         // criteria 4 and 5, same for both sides of each comparison
constexpr double kValidShare = 0.9;         // criterion 1
constexpr int kQuantOffRefutations = 4;     // criterion 4
constexpr int kOracleTrials = 10000;        // criterion 8
constexpr int kRandomDecimals = 1000;       // criterion 7
constexpr int kRandomLiterals = 1000;       // criterion 7
constexpr int kPropertyTerms = 500;         // criterion 9

const std::vector<std::string> kInvalidCases = {"Complex.add(2)", "FPLoop.fploop2", "FPLoop.fploop3", "Rectangle.scale(1)",
                                                "Matrix3.transposedEq"};
const std::vector<std::string> kTranscendental = {"Cartesian.toPolar", "Cartesian.distanceTo", "Polar.toCartesian",
                                                  "Circuit.instantVoltage"};

struct Line {
  int id;
  bool pass;
  std::string text;
};

std::vector<Line> g_lines;

void report(int id, bool pass, const std::string& text) {
  g_lines.push_back({id, pass, text});
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", text.c_str());
  std::fflush(stdout);
}

void detail(const std::string& s) { std::cerr << "  " << s << "\n"; }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Env {
  Corpus corpus;
  std::vector<SolverConfig> installed;  // available solvers, preferred first
  std::uint64_t seed = 1;

  const BenchmarkCase& bench(const std::string& name) const {
    for (const auto& b : corpus.cases)
      if (b.name == name) return b;
    throw CorpusError("no corpus case " + name);
  }
};

// Results shared between criteria.
struct Shared {
  std::vector<std::string> provenValid;          // criterion 1
  std::vector<CaseResult> refutations;           // criterion 2, confirmed cases
  int confirmedQuantOff = -1;                    // criterion 2 count, -1 if not run
};

ExperimentOptions options(const SolverConfig& s, double timeout, TransMode tm = TransMode::GroundInst, bool quant = false) {
  ExperimentOptions o;
  SolverConfig c = s;
  c.timeoutSeconds = timeout;
  o.solvers = {c};
  o.emit.transMode = tm;
  o.emit.backgroundQuantifiers = quant;
  return o;
}

ProgressFn progress_for(const std::string& tag) {
  return [tag](const CaseResult& r, const GoalRecord& g) {
    const Verdict& v = g.verdict.perSolver.front();
    std::cerr << "    [" << tag << "] " << r.bench.name << " " << g.obligation.name << ": " << aggregate_name(g.verdict.outcome)
              << fmt(" (%.1fs)", v.wallTimeSeconds) << "\n";
  };
}

bool confirmed(const GoalRecord& g) {
  return std::any_of(g.verdict.perSolver.begin(), g.verdict.perSolver.end(), [](const Verdict& v) {
    return v.outcome == Outcome::Invalid && v.replay == ReplayStatus::Confirmed;
  });
}

int decided_goals(const CaseResult& r) {
  int n = 0;
  for (const auto& g : r.goals)
    if (g.verdict.outcome == Aggregate::Valid || confirmed(g)) ++n;
  return n;
}

// 1 -------------------------------------------------------------------------

void criterion1(const Env& env, Shared& sh) {
  const auto cases = suite_cases(env.corpus, "valid");
  int best = -1;
  std::string best_solver;
  for (const auto& s : env.installed) {
    const auto results = run_cases(cases, options(s, kGoalTimeout), progress_for(s.name));
    int proven = 0;
    std::vector<std::string> names;
    for (const auto& r : results) {
      detail(s.name + ": " + r.bench.name + " " + std::string(case_verdict_name(r.verdict)));
      if (r.verdict == CaseVerdict::Valid) {
        ++proven;
        names.push_back(r.bench.name);
      }
    }
    if (proven > best) {
      best = proven;
      best_solver = s.name;
      sh.provenValid = names;
    }
    // Later solvers cannot lower the best count.
    if (proven >= kValidShare * static_cast<double>(cases.size())) break;
  }
  const bool pass = best >= 0 && best >= kValidShare * static_cast<double>(cases.size());
  report(1, pass,
         fmt("valid suite: %d/%zu contracts proven by %s (need >= %.0f%%, %.0f s per goal)", std::max(best, 0), cases.size(),
             best_solver.empty() ? "no solver" : best_solver.c_str(), kValidShare * 100, kGoalTimeout));
}

// 2 -------------------------------------------------------------------------

std::set<std::string> refute_invalid(const Env& env, Shared& sh) {
  std::set<std::string> open(kInvalidCases.begin(), kInvalidCases.end());
  for (const auto& s : env.installed) {
    for (const auto& name : kInvalidCases) {
      if (!open.count(name)) continue;
      const BenchmarkCase& b = env.bench(name);
      const double timeout = name == "Matrix3.transposedEq" ? kExtendedTimeout : kGoalTimeout;
      const CaseResult r = run_case(b, options(s, timeout), progress_for(s.name));
      if (std::any_of(r.goals.begin(), r.goals.end(), confirmed)) {
        detail(name + ": confirmed counterexample from " + s.name);
        open.erase(name);
        sh.refutations.push_back(r);
      }
    }
  }
  for (const auto& name : open) detail(name + ": no confirmed counterexample");
  sh.confirmedQuantOff = static_cast<int>(kInvalidCases.size() - open.size());
  return open;
}

void criterion2(const Env& env, Shared& sh) {
  const std::set<std::string> open = refute_invalid(env, sh);
  report(2, open.empty(),
         fmt("invalid suite: %d/%zu contracts refuted with a replay-confirmed model (%.0f s per goal, %.0f s for Matrix3.transposedEq)",
             sh.confirmedQuantOff, kInvalidCases.size(), kGoalTimeout, kExtendedTimeout));
}

// 3 -------------------------------------------------------------------------

void criterion3(const Env& env) {
  std::vector<std::string> failed;
  for (const std::string name : {"Matrix3.transposedEqV2", "Rotate.computeError"}) {
    bool ok = false;
    for (const auto& s : env.installed) {
      const CaseResult r = run_case(env.bench(name), options(s, kGoalTimeout), progress_for(s.name));
      if (r.verdict == CaseVerdict::Valid) {
        detail(name + ": proven by " + s.name);
        ok = true;
        break;
      }
    }
    if (!ok) failed.push_back(name);
  }
  std::string text = "Matrix3.transposedEqV2 and Rotate.computeError proven";
  for (const auto& f : failed) text += "; not proven: " + f;
  report(3, failed.empty(), text + fmt(" (%.0f s per goal)", kGoalTimeout));
}

// 4 -------------------------------------------------------------------------

void criterion4(const Env& env, const Shared& sh) {
  std::vector<BenchmarkCase> cases;
  for (const auto& n : kInvalidCases) cases.push_back(env.bench(n));
  int confirmed_on = 0;
  int runs = 0;
  for (const auto& s : env.installed) {
    if (!s.supportsQuantifiers) continue;
    ++runs;
    for (const auto& r : run_cases(cases, options(s, kModeTimeout, TransMode::SmtAxioms, true), progress_for(s.name + " q-on"))) {
      const int c = static_cast<int>(std::count_if(r.goals.begin(), r.goals.end(), confirmed));
      if (c) detail(s.name + ": " + r.bench.name + " confirmed with quantifiers on");
      confirmed_on += c;
    }
  }
  // Skipped rows for solvers without quantifier support.
  bool skipped_ok = true;
  for (const auto& s : env.installed) {
    if (s.supportsQuantifiers) continue;
    for (const auto& r : run_cases({cases.front()}, options(s, kModeTimeout, TransMode::SmtAxioms, true)))
      for (const auto& g : r.goals) skipped_ok = skipped_ok && g.verdict.outcome == Aggregate::Skipped;
  }
  const bool pass = runs > 0 && confirmed_on == 0 && sh.confirmedQuantOff >= kQuantOffRefutations && skipped_ok;
  report(4, pass,
         fmt("quantifiers on + smt-axioms: %d confirmed counterexamples (need 0, %.0f s per goal); quantifiers off: %d "
             "refuted contracts (need >= %d)",
             confirmed_on, kModeTimeout, std::max(sh.confirmedQuantOff, 0), kQuantOffRefutations));
}

// 5 -------------------------------------------------------------------------

void criterion5(const Env& env) {
  std::vector<BenchmarkCase> cases;
  for (const auto& n : kTranscendental) cases.push_back(env.bench(n));
  bool pass = !env.installed.empty();
  std::string text;
  for (const auto& s : env.installed) {
    int decided[2] = {0, 0};
    int k = 0;
    for (TransMode tm : {TransMode::GroundInst, TransMode::SmtAxioms}) {
      for (const auto& r : run_cases(cases, options(s, kModeTimeout, tm), progress_for(s.name + " " + std::string(trans_mode_name(tm)))))
        decided[k] += decided_goals(r);
      ++k;
    }
    pass = pass && decided[0] >= decided[1];
    if (!text.empty()) text += ", ";
    text += fmt("%s ground-inst %d vs smt-axioms %d", s.name.c_str(), decided[0], decided[1]);
  }
  report(5, pass, "decided transcendental goals: " + (text.empty() ? std::string("no solver") : text) + fmt(" (%.0f s per goal)", kModeTimeout));
}

// 6 -------------------------------------------------------------------------

void criterion6() {
  const golden::Result r = golden::run(false);
  for (const auto& m : r.mismatches) detail("snapshot differs: " + m);

  ProofObligation po;
  po.name = "post1";
  const Term x = term::var("x", Sort::Float64);
  po.goal = term::fp_leq(term::apply(Fn::Sin, x), term::fp_double(1.0));
  po.occurrences = collect_occurrences({po.goal});
  EmitOptions o;
  o.transMode = TransMode::SmtAxioms;
  const std::string doc = emit_smt(po, o).text;
  const std::string zeros(52, '0');
  const std::string shape = "(assert (forall ((a Float64)) (=> (and (not (fp.isNaN a)) (not (fp.isInfinite a))) (and (fp.leq (sinDouble a) (fp #b0 #b01111111111 #b" +
                            zeros + ")) (fp.geq (sinDouble a) (fp #b1 #b01111111111 #b" + zeros + "))))))";
  const bool sin_ok = doc.find(shape) != std::string::npos;
  if (!sin_ok) detail("sin range axiom not found in the expected shape");
  report(6, r.mismatches.empty() && r.compared == 80 && sin_ok,
         fmt("golden snapshots: %d/%d identical (10 goals x 8 option combinations); sin range axiom shape %s",
             r.compared - static_cast<int>(r.mismatches.size()), r.compared, sin_ok ? "matches" : "differs"));
}

// 7 -------------------------------------------------------------------------

void collect_literals(const minif::Expr& e, std::vector<std::pair<std::string, bool>>& out) {
  minif::for_each_expr(e, [&](const minif::Expr& x) {
    if (x.kind == minif::ExprKind::FloatLit) out.emplace_back(x.text, x.single);
  });
}

bool host_matches(const std::string& text, bool single) {
  if (single) {
    const float f = std::strtof(text.c_str(), nullptr);
    return encode_decimal(text, Sort::Float32) == FpLiteral::from_float(f);
  }
  const double d = std::strtod(text.c_str(), nullptr);
  return encode_decimal(text, Sort::Float64) == FpLiteral::from_double(d);
}

void criterion7(const Env& env) {
  std::vector<std::pair<std::string, bool>> lits;
  std::set<std::string> files;
  for (const auto& b : env.corpus.cases) files.insert(b.file);
  for (const auto& f : files) {
    const minif::Program p = minif::parse_file(f);
    for (const auto& c : p.constants) collect_literals(c.value, lits);
    for (const auto& m : p.methods) {
      minif::for_each_expr(m.body, [&](const minif::Expr& x) {
        if (x.kind == minif::ExprKind::FloatLit) lits.emplace_back(x.text, x.single);
      });
      for (const auto& c : m.contracts) {
        if (c.requires_) collect_literals(*c.requires_, lits);
        if (c.ensures) collect_literals(*c.ensures, lits);
      }
    }
  }
  int corpus_bad = 0;
  bool listing_seen = false;
  for (const auto& [text, single] : lits) {
    listing_seen = listing_seen || text == "6.123233995736766E-17";
    if (!host_matches(text, single)) {
      ++corpus_bad;
      detail("corpus literal mismatch: " + text);
    }
  }

  std::mt19937_64 rng(env.seed);
  int random_bad = 0;
  for (int i = 0; i < kRandomDecimals; ++i) {
    std::string s = (rng() % 2) ? "-" : "";
    const int digits = 1 + static_cast<int>(rng() % 25);
    for (int k = 0; k < digits; ++k) s += static_cast<char>('0' + rng() % 10);
    if (rng() % 2) {
      s += ".";
      const int frac = 1 + static_cast<int>(rng() % 20);
      for (int k = 0; k < frac; ++k) s += static_cast<char>('0' + rng() % 10);
    }
    s += "e" + std::to_string(static_cast<int>(rng() % 700) - 350);
    const bool single = rng() % 4 == 0;
    if (!host_matches(s, single)) {
      ++random_bad;
      detail("random decimal mismatch: " + s);
    }
  }

  int trip_bad = 0;
  for (int i = 0; i < kRandomLiterals; ++i) {
    const Sort s = rng() % 2 ? Sort::Float64 : Sort::Float32;
    FpLiteral lit;
    switch (rng() % 6) {
      case 0: lit = FpLiteral::nan(s); break;
      case 1: lit = FpLiteral::infinity(s, rng() % 2); break;
      case 2: lit = FpLiteral::from_fields(s, rng() % 2, 0, 1 + rng() % ((1ull << significand_bits(s)) - 1)); break;
      default: lit = FpLiteral::from_bits(s, s == Sort::Float64 ? rng() : rng() & 0xffffffffull);
    }
    if (parse_fp_literal(format_fp_literal(lit)) != lit) ++trip_bad;
  }
  report(7, corpus_bad == 0 && listing_seen && random_bad == 0 && trip_bad == 0,
         fmt("literal encoding vs host conversion: corpus %zu literals, %d mismatches%s; %d random decimals, %d mismatches; "
             "%d literal round trips, %d failures",
             lits.size(), corpus_bad, listing_seen ? "" : " (listing constant missing)", kRandomDecimals, random_bad,
             kRandomLiterals, trip_bad));
}

// 8 -------------------------------------------------------------------------

void criterion8(const Env& env, const Shared& sh, bool solvers_ran) {
  std::vector<std::string> targets = sh.provenValid;
  if (!solvers_ran)
    for (const auto& b : suite_cases(env.corpus, "valid")) targets.push_back(b.name);
  int checked = 0, violated = 0, gave_up = 0;
  for (const auto& name : targets) {
    const BenchmarkCase& b = env.bench(name);
    const auto tp = minif::typecheck(minif::parse_file(b.file));
    const minif::MethodDecl* m = tp.program.find_method(b.method);
    if (uses_library_functions(tp, *m, true)) continue;
    try {
      const auto cex = falsify(tp, *m, b.contract - 1, kOracleTrials, env.seed);
      ++checked;
      if (cex) {
        ++violated;
        std::string in;
        for (const auto& [k, v] : cex->inputs) in += " " + k + "=" + format_value(v, tp.program);
        detail(name + ": oracle violation at trial " + std::to_string(cex->trial) + ":" + in);
      }
    } catch (const SamplingGiveUp& e) {
      ++gave_up;
      detail(name + ": sampling gave up: " + e.what());
    }
  }

  int replays = 0, not_reproduced = 0;
  for (const auto& r : sh.refutations) {
    const auto tp = minif::typecheck(minif::parse_file(r.bench.file));
    const minif::MethodDecl* m = tp.program.find_method(r.bench.method);
    for (const auto& g : r.goals)
      for (const auto& v : g.verdict.perSolver) {
        if (v.outcome != Outcome::Invalid || v.replay != ReplayStatus::Confirmed || !v.model) continue;
        ++replays;
        const ReplayResult a = replay(tp, *m, r.bench.contract - 1, v.model->values, false);
        const ReplayResult b = replay(tp, *m, r.bench.contract - 1, v.model->values, false);
        // The violation must reproduce, with the identical result bits.
        const bool same = a.status == ReplayStatus::Confirmed && b.status == ReplayStatus::Confirmed && a.check.result &&
                          b.check.result && *a.check.result == *b.check.result && a.inputs == b.inputs;
        const ContractCheck direct = check_contract(tp, *m, r.bench.contract - 1, a.inputs);
        if (!same || !direct.pre || direct.post != false || direct.result != a.check.result) {
          ++not_reproduced;
          detail(r.bench.name + " " + g.obligation.name + ": replay of the " + v.solverName + " model did not reproduce");
        }
      }
  }
  report(8, violated == 0 && gave_up == 0 && not_reproduced == 0 && checked > 0,
         fmt("oracle: %d arithmetic-only valid contracts x %d trials, %d violations, %d sampling failures; %d confirmed "
             "counterexamples replayed, %d not reproduced",
             checked, kOracleTrials, violated, gave_up, replays, not_reproduced));
}

// 9 -------------------------------------------------------------------------

Term random_arg(std::mt19937_64& rng, int depth) {
  const Term x = term::var("x", Sort::Float64), y = term::var("y", Sort::Float64);
  switch (depth <= 0 ? rng() % 3 : rng() % 7) {
    case 0: return x;
    case 1: return y;
    case 2: return term::fp(FpLiteral::from_bits(Sort::Float64, rng()));
    case 3: return term::fp_add(random_arg(rng, depth - 1), random_arg(rng, depth - 1));
    case 4: return term::fp_mul(random_arg(rng, depth - 1), random_arg(rng, depth - 1));
    case 5: return term::apply(Fn::Cos, random_arg(rng, depth - 1));
    default: return term::ite(term::fp_lt(x, y), random_arg(rng, depth - 1), random_arg(rng, depth - 1));
  }
}

void criterion9(const Env& env) {
  // Reference catalog, one entry per schema.
  const std::vector<std::pair<std::string, std::string>> reference = {
      {"sin.nan-or-inf", "If arg is NaN or an infinity, then sin(arg) is NaN."},
      {"sin.zero-sign", "If arg is a zero, then sin(arg) is a zero with the same sign."},
      {"sin.range", "If arg is neither NaN nor an infinity, then sin(arg) is between -1.0 and 1.0."},
      {"sin.not-nan", "If arg is neither NaN nor an infinity, then sin(arg) is not NaN."},
      {"cos.nan-or-inf", "If arg is NaN or an infinity, then cos(arg) is NaN."},
      {"cos.range", "If arg is neither NaN nor an infinity, then cos(arg) is between -1.0 and 1.0."},
      {"cos.not-nan", "If arg is neither NaN nor an infinity, then cos(arg) is not NaN."},
      {"atan.nan-or-inf", "If arg is NaN or an infinity, then atan(arg) is NaN."},
      {"atan.zero-sign", "If arg is a zero, then atan(arg) is a zero with the same sign."},
      {"atan.range", "If arg is not NaN, then atan(arg) is between -pi/2 and pi/2."},
      {"sqrt.nan-or-negative", "If arg is NaN or less than zero, then sqrt(arg) is NaN."},
      {"sqrt.pos-inf", "If arg is positive infinity, then sqrt(arg) is positive infinity."},
      {"sqrt.zero", "If arg is positive or negative zero, then sqrt(arg) is the same as arg."},
      {"sqrt.not-nan", "If arg is not NaN and greater than or equal to zero, then sqrt(arg) is not NaN."},
      {"sqrt.monotone-below", "If arg is not an infinity and greater than 1, then sqrt(arg) < arg."},
  };
  const auto all = all_axioms();
  const std::size_t trans = axiom_pack(Fn::Sin).size() + axiom_pack(Fn::Cos).size() + axiom_pack(Fn::Atan).size();
  const std::size_t sqrt = axiom_pack(Fn::Sqrt).size();
  bool catalog = all.size() == reference.size();
  for (std::size_t i = 0; catalog && i < all.size(); ++i) catalog = all[i].id == reference[i].first && all[i].text == reference[i].second;

  std::mt19937_64 rng(env.seed);
  int bad = 0;
  for (int i = 0; i < kPropertyTerms; ++i) {
    const Term arg = random_arg(rng, 3);
    const AxiomSchema& s = all[rng() % all.size()];
    const auto inst = ground_instances({s}, {{s.symbol, arg}});
    if (inst.size() != 1 || inst[0] != substitute(s.tmpl, {{"a", arg}})) ++bad;
  }
  report(9, catalog && trans == 10 && sqrt == 5 && bad == 0,
         fmt("axiom catalog: %zu transcendental + %zu sqrt schemas, reference match %s; ground instance = substitution on "
             "%d/%d random terms",
             trans, sqrt, catalog ? "exact" : "broken", kPropertyTerms - bad, kPropertyTerms));
}

// 10 ------------------------------------------------------------------------

void criterion10(const Env& env) {
  const std::regex forall_token(R"(\bforall\b)");
  int docs = 0, with_forall = 0;
  for (const auto& b : env.corpus.cases) {
    const auto tp = minif::typecheck(minif::parse_file(b.file));
    for (const auto& po : generate_obligations(tp, b.method, b.contract - 1))
      for (SqrtMode sm : {SqrtMode::Builtin, SqrtMode::Axioms}) {
        EmitOptions o;
        o.transMode = TransMode::GroundInst;
        o.sqrtMode = sm;
        o.backgroundQuantifiers = false;
        ++docs;
        if (std::regex_search(emit_smt(po, o).text, forall_token)) {
          ++with_forall;
          detail(b.name + " " + po.name + ": forall in ground-inst document");
        }
      }
  }
  report(10, with_forall == 0 && docs > 0, fmt("ground-inst, quantifiers off: %d corpus documents scanned, %d contain forall", docs, with_forall));
}

std::vector<SolverConfig> installed_solvers(const std::string& config, const std::string& order) {
  std::vector<SolverConfig> out;
  for (const auto& s : resolve_solver_configs(config))
    if (solver_available(s)) out.push_back(s);
  // Preferred solvers first; this only changes how soon criteria 1-3 can stop.
  std::vector<std::string> pref;
  std::stringstream in(order);
  for (std::string n; std::getline(in, n, ',');) pref.push_back(n);
  auto rank = [&](const SolverConfig& s) {
    const auto it = std::find(pref.begin(), pref.end(), s.name);
    return it == pref.end() ? pref.size() : static_cast<std::size_t>(it - pref.begin());
  };
  std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return rank(a) < rank(b); });
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"floatdv acceptance checks"};
  std::string config, order = "cvc5,mathsat,z3", only;
  bool solver_free = false;
  std::uint64_t seed = 1;
  app.add_option("--config", config, "solver config");
  app.add_option("--order", order, "solver preference for criteria 1-3");
  app.add_option("--only", only, "comma-separated criteria to run");
  app.add_flag("--solver-free", solver_free, "run criteria 6-10 only");
  app.add_option("--seed", seed, "oracle and property-test seed");
  CLI11_PARSE(app, argc, argv);

  std::set<int> selected;
  {
    std::stringstream in(only);
    for (std::string n; std::getline(in, n, ',');) selected.insert(std::stoi(n));
  }
  auto want = [&](int k) { return (selected.empty() || selected.count(k)) && !(solver_free && k <= 5); };

  Env env;
  env.seed = seed;
  try {
    env.corpus = load_corpus(default_corpus_dir() + "/manifest.json");
    env.installed = installed_solvers(config, order);
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "installed solvers:";
  for (const auto& s : env.installed) std::cerr << " " << s.name;
  std::cerr << (env.installed.empty() ? " none" : "") << "\n";

  Shared sh;
  const auto t0 = std::chrono::steady_clock::now();
  auto guard = [&](int k, auto&& fn) {
    if (!want(k)) return;
    if (k <= 5 && env.installed.empty()) {
      report(k, false, "no SMT solver with floating-point support is installed");
      return;
    }
    try {
      fn();
    } catch (const std::exception& e) {
      report(k, false, std::string("error: ") + e.what());
    }
  };
  guard(1, [&] { criterion1(env, sh); });
  guard(2, [&] { criterion2(env, sh); });
  guard(3, [&] { criterion3(env); });
  guard(4, [&] {
    if (sh.confirmedQuantOff < 0) refute_invalid(env, sh);
    criterion4(env, sh);
  });
  guard(5, [&] { criterion5(env); });
  guard(6, [&] { criterion6(); });
  guard(7, [&] { criterion7(env); });
  guard(8, [&] { criterion8(env, sh, want(1)); });
  guard(9, [&] { criterion9(env); });
  guard(10, [&] { criterion10(env); });

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto failed = std::count_if(g_lines.begin(), g_lines.end(), [](const Line& l) { return !l.pass; });
  std::cerr << fmt("%zu criteria checked, %ld failed, %.0f s\n", g_lines.size(), static_cast<long>(failed), secs);
  return failed ? 1 : 0;
}
