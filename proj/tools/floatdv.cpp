// floatdv: deductive verification of floating-point MiniF programs.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "floatdv/bench.hpp"
#include "floatdv/interpreter.hpp"
#include "floatdv/parser.hpp"
#include "floatdv/typecheck.hpp"

namespace fs = std::filesystem;
using namespace floatdv;

namespace {

constexpr int kExitValid = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitOpen = 2;
constexpr int kExitToolError = 3;

struct Flags {
  std::string config;
  std::string solvers;
  double timeout = 0;
  std::string transMode = "ground-inst";
  std::string sqrtMode = "builtin";
  std::string quantifiers = "off";
  std::string emitDir;
  int jobs = 1;
  std::uint64_t seed = 1;
  std::string report = "md";
  std::string output;
  int inlineDepth = 8;
  bool noSplit = false;
  bool trace = false;
  bool quiet = false;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "solver config file (default: $FLOATDV_CONFIG, then the bundled one)");
  app->add_option("--solver", f.solvers, "comma-separated solver names to use");
  app->add_option("--timeout", f.timeout, "per-goal solver timeout in seconds")->check(CLI::PositiveNumber);
  app->add_option("--trans-mode", f.transMode, "library function axioms: quantified or ground instances")
      ->check(CLI::IsMember({"smt-axioms", "ground-inst"}));
  app->add_option("--sqrt-mode", f.sqrtMode, "square root as fp.sqrt or through axioms")->check(CLI::IsMember({"builtin", "axioms"}));
  app->add_option("--quantifiers", f.quantifiers, "include the quantified background theory")->check(CLI::IsMember({"on", "off"}));
  app->add_option("--emit-smt", f.emitDir, "write every query to this directory");
  app->add_option("--jobs", f.jobs, "goals solved in parallel")->check(CLI::PositiveNumber);
  app->add_option("--seed", f.seed, "seed recorded with the experiment and used by the oracle");
  app->add_option("--report", f.report, "report format")->check(CLI::IsMember({"md", "csv", "json"}));
  app->add_option("-o,--output", f.output, "write the report here instead of stdout");
  app->add_option("--inline-depth", f.inlineDepth, "maximum call nesting to inline")->check(CLI::PositiveNumber);
  app->add_flag("--no-split", f.noSplit, "one obligation per contract instead of one per conjunct");
  app->add_flag("--trace", f.trace, "print interpreter traces of confirmed counterexamples");
  app->add_flag("-q,--quiet", f.quiet, "no progress lines");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

ExperimentOptions experiment(const Flags& f) {
  ExperimentOptions o;
  o.emit.transMode = parse_trans_mode(f.transMode);
  o.emit.sqrtMode = parse_sqrt_mode(f.sqrtMode);
  o.emit.backgroundQuantifiers = f.quantifiers == "on";
  o.vc.inlineDepth = f.inlineDepth;
  o.vc.splitGoals = !f.noSplit;
  o.jobs = f.jobs;
  o.seed = f.seed;
  o.emitDir = f.emitDir;
  o.trace = f.trace;
  std::vector<SolverConfig> all = resolve_solver_configs(f.config);
  if (!f.solvers.empty()) {
    std::vector<SolverConfig> chosen;
    for (const auto& name : split_list(f.solvers)) {
      auto it = std::find_if(all.begin(), all.end(), [&](const SolverConfig& c) { return c.name == name; });
      if (it == all.end()) throw ConfigError("solver '" + name + "' is not configured");
      if (!solver_available(*it)) throw ConfigError("solver '" + name + "' not found at " + it->path);
      chosen.push_back(*it);
    }
    all = std::move(chosen);
  }
  if (f.timeout > 0)
    for (auto& c : all) c.timeoutSeconds = f.timeout;
  o.solvers = std::move(all);
  return o;
}

void write_output(const Flags& f, const std::string& text) {
  if (f.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream(f.output) << text;
}

std::string verdict_summary(const AggregatedVerdict& v) {
  std::string s;
  for (const auto& sv : v.perSolver) {
    if (!s.empty()) s += " | ";
    char t[32];
    std::snprintf(t, sizeof t, " %.2fs", sv.wallTimeSeconds);
    s += sv.solverName + ": " + std::string(outcome_name(sv.outcome));
    if (sv.outcome != Outcome::Skipped) s += t;
    if (sv.replay) s += " " + std::string(replay_status_name(*sv.replay));
    if (sv.outcome == Outcome::Error) s += " (" + sv.message + ")";
  }
  return s;
}

void print_counterexample(const minif::TypedProgram& tp, const BenchmarkCase& b, const GoalRecord& g, const ExperimentOptions& o) {
  for (const auto& v : g.verdict.perSolver) {
    if (v.outcome != Outcome::Invalid || !v.model) continue;
    const minif::MethodDecl* m = tp.program.find_method(b.method);
    const ReplayResult r = replay(tp, *m, b.contract - 1, v.model->values, o.emit.sqrtMode == SqrtMode::Axioms, o.trace);
    std::cout << "    counterexample from " << v.solverName << " (" << replay_status_name(r.status) << ": " << r.detail << ")\n";
    for (const auto& [name, value] : r.inputs) std::cout << "      " << name << " = " << format_value(value, tp.program) << "\n";
    if (r.check.result) std::cout << "      \\result = " << format_value(*r.check.result, tp.program) << "\n";
    for (const auto& [fn, table] : v.model->functions)
      for (const auto& [arg, val] : table.points)
        std::cout << "      " << fn << "(" << format_value(arg) << ") = " << format_value(val) << "  [solver model]\n";
    for (const auto& line : r.trace) std::cout << "      | " << line << "\n";
    return;
  }
}

int cmd_verify(const std::string& file, const std::string& method, int contract, const std::string& dump, const Flags& f) {
  const ExperimentOptions o = experiment(f);
  const minif::TypedProgram tp = minif::typecheck(minif::parse_file(file));
  std::vector<BenchmarkCase> cases;
  for (const auto& m : tp.program.methods) {
    if (!method.empty() && m.name != method) continue;
    for (int k = 1; k <= static_cast<int>(m.contracts.size()); ++k) {
      if (contract > 0 && k != contract) continue;
      BenchmarkCase b;
      b.name = m.name + "(" + std::to_string(k) + ")";
      b.file = fs::absolute(file).string();
      b.method = m.name;
      b.contract = k;
      b.expected = "valid";
      cases.push_back(std::move(b));
    }
  }
  if (!method.empty() && !tp.program.find_method(method)) throw CorpusError("no method '" + method + "' in " + file);
  if (cases.empty()) throw CorpusError("nothing to verify: no matching contract in " + file);

  if (!dump.empty()) {
    std::vector<ProofObligation> all;
    for (const auto& b : cases)
      for (auto& po : generate_obligations(tp, b.method, b.contract - 1, o.vc)) all.push_back(std::move(po));
    std::ofstream(dump) << obligations_to_json(all);
  }

  ProgressFn progress;
  if (!f.quiet)
    progress = [](const CaseResult& r, const GoalRecord& g) {
      std::cerr << "  " << r.bench.name << " " << g.obligation.name << ": " << aggregate_name(g.verdict.outcome) << "\n";
    };
  const std::vector<CaseResult> results = run_cases(cases, o, progress);

  bool error = false, refuted = false, open = false;
  for (const auto& r : results) {
    std::cout << r.bench.method << " contract " << r.bench.contract << ": " << case_verdict_name(r.verdict) << "\n";
    if (!r.error.empty()) std::cout << "  error: " << r.error << "\n";
    for (const auto& g : r.goals) {
      std::cout << "  " << g.obligation.name << " [" << g.obligation.provenance.path << "]: " << aggregate_name(g.verdict.outcome)
                << "  (" << verdict_summary(g.verdict) << ")\n";
      if (g.verdict.outcome == Aggregate::Refuted || g.verdict.outcome == Aggregate::Invalid) print_counterexample(tp, r.bench, g, o);
      if (!g.smtFile.empty()) std::cout << "    query: " << g.smtFile << "\n";
    }
    switch (r.verdict) {
      case CaseVerdict::Error: error = true; break;
      case CaseVerdict::Refuted: refuted = true; break;
      case CaseVerdict::Open: open = true; break;
      case CaseVerdict::Valid: break;
    }
  }
  if (f.report != "md" || !f.output.empty()) write_output(f, render_report(build_report(results, o, file), parse_report_format(f.report)));
  if (error) return kExitToolError;
  if (refuted) return kExitRefuted;
  return open ? kExitOpen : kExitValid;
}

int cmd_bench(const std::string& suite, const std::string& corpus_dir, const std::string& runtimes, const Flags& f) {
  const ExperimentOptions o = experiment(f);
  const std::string dir = corpus_dir.empty() ? default_corpus_dir() : corpus_dir;
  const Corpus corpus = load_corpus((fs::path(dir) / "manifest.json").string());
  const std::vector<BenchmarkCase> cases = suite_cases(corpus, suite);
  ProgressFn progress;
  if (!f.quiet)
    progress = [](const CaseResult& r, const GoalRecord& g) {
      std::cerr << r.bench.name << " " << g.obligation.name << ": " << aggregate_name(g.verdict.outcome) << "  ("
                << verdict_summary(g.verdict) << ")\n";
    };
  const std::vector<CaseResult> results = run_cases(cases, o, progress);
  const ReportTable table = build_report(results, o, suite);
  write_output(f, render_report(table, parse_report_format(f.report)));
  if (!runtimes.empty()) std::ofstream(runtimes) << runtimes_csv(results, table.solvers);
  for (const auto& r : results)
    if (r.verdict == CaseVerdict::Error) return kExitToolError;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"floatdv: deductive verifier for floating-point MiniF programs"};
  app.require_subcommand(1);

  Flags vf;
  std::string file, method, dump;
  int contract = 0;
  CLI::App* verify = app.add_subcommand("verify", "prove the contracts of a MiniF file");
  verify->add_option("file", file, "MiniF source")->required()->check(CLI::ExistingFile);
  verify->add_option("--method", method, "only this method");
  verify->add_option("--contract", contract, "only this contract (1-based)")->check(CLI::PositiveNumber);
  verify->add_option("--dump-obligations", dump, "write the proof obligations as JSON");
  add_common(verify, vf);

  Flags bf;
  std::string suite, corpus, runtimes;
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark suite and print a report");
  bench->add_option("suite", suite, "valid, invalid, transcendental, sqrt, sensitivity or all")
      ->required()
      ->check(CLI::IsMember(kSuites));
  bench->add_option("--corpus", corpus, "corpus directory containing manifest.json");
  bench->add_option("--runtimes", runtimes, "write per-solver goal runtimes (CSV, ascending)");
  add_common(bench, bf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitToolError;
  }

  try {
    if (*verify) return cmd_verify(file, method, contract, dump, vf);
    return cmd_bench(suite, corpus, runtimes, bf);
  } catch (const minif::FrontendError& e) {
    std::cerr << "floatdv: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "floatdv: " << e.what() << "\n";
  }
  return kExitToolError;
}
