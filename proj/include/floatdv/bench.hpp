#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "floatdv/smt_emit.hpp"
#include "floatdv/solver.hpp"
#include "floatdv/vcgen.hpp"

namespace floatdv {

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BenchmarkCase {
  std::string name;      // Complex.add(2)
  std::string file;      // absolute path
  std::string method;
  int contract = 1;      // 1-based
  std::string expected;  // valid | invalid
  std::vector<std::string> tags;
  std::vector<std::string> suites;

  bool has_tag(std::string_view t) const;
};

struct Corpus {
  std::string root;
  std::vector<BenchmarkCase> cases;
};

Corpus load_corpus(const std::string& manifest);
/// Directory of the bundled corpus (overridable with $FLOATDV_CORPUS).
std::string default_corpus_dir();

inline const std::vector<std::string> kSuites = {"valid", "invalid", "transcendental", "sqrt", "sensitivity", "all"};
/// Cases of `suite` in manifest order. Throws CorpusError on an unknown suite.
std::vector<BenchmarkCase> suite_cases(const Corpus& c, std::string_view suite);

struct ExperimentOptions {
  EmitOptions emit;
  VcOptions vc;
  std::vector<SolverConfig> solvers;  // all configured, available or not
  int jobs = 1;                       // parallel goals
  bool concurrentSolvers = false;
  std::uint64_t seed = 1;
  std::string emitDir;                // write each query here when set
  bool trace = false;                 // keep interpreter traces of replays
};

struct GoalRecord {
  ProofObligation obligation;
  AggregatedVerdict verdict;
  /// Replay trace of the first confirmed model, when tracing.
  std::vector<std::string> trace;
  std::string smtFile;
};

enum class CaseVerdict { Valid, Refuted, Open, Error };
std::string_view case_verdict_name(CaseVerdict v);

struct CaseResult {
  BenchmarkCase bench;
  std::vector<GoalRecord> goals;
  std::string error;  // front-end or generation failure
  CaseVerdict verdict = CaseVerdict::Error;
  bool conforms = false;  // verdict matches `expected`
};

/// Aggregate of a whole contract: Valid when every goal is, Refuted when a
/// goal has a confirmed counterexample, Error on a conflict or tool error.
CaseVerdict combine_goals(const std::vector<GoalRecord>& goals);

/// File name for an emitted query: `<benchmark>.<contract>.<goal>.smt2`.
std::string smt_file_name(const std::string& benchmark, int contract, const std::string& goal);

/// Method-level name without the contract suffix: Complex.add(2) -> Complex.add.
std::string benchmark_stem(const std::string& name);

using ProgressFn = std::function<void(const CaseResult&, const GoalRecord&)>;

/// Proves one contract of a source file. Configured but unavailable solvers
/// are skipped.
CaseResult run_case(const BenchmarkCase& bench, const ExperimentOptions& opts, const ProgressFn& progress = {});
std::vector<CaseResult> run_cases(const std::vector<BenchmarkCase>& cases, const ExperimentOptions& opts,
                                  const ProgressFn& progress = {});

// ---------------------------------------------------------------------------
// Reports

struct SolverCell {
  bool available = true;
  int decided = 0;            // valid, or invalid with a confirmed model
  int skipped = 0;
  std::optional<double> avg;  // over goals that did not time out
  std::optional<double> max;
  bool timeout = false;       // max column prints TO
};

struct ReportRow {
  std::string benchmark;
  int goals = 0;
  std::string expected;
  std::string verdict;
  bool conforms = false;
  std::vector<SolverCell> cells;  // one per solver column
  std::vector<std::pair<std::string, std::string>> goalVerdicts;
  std::string error;
};

struct ReportMeta {
  std::string suite;
  std::string transMode;
  std::string sqrtMode;
  bool backgroundQuantifiers = false;
  double timeout = 0;
  std::uint64_t seed = 0;
};

struct ReportTable {
  ReportMeta meta;
  std::vector<std::string> solvers;
  std::vector<ReportRow> rows;
};

enum class ReportFormat { Markdown, Csv, Json };
ReportFormat parse_report_format(std::string_view s);

ReportTable build_report(const std::vector<CaseResult>& results, const ExperimentOptions& opts, const std::string& suite);
std::string render_report(const ReportTable& t, ReportFormat fmt);

/// Per-solver runtimes of decided goals, ascending: `solver,rank,seconds,benchmark,goal`.
std::string runtimes_csv(const std::vector<CaseResult>& results, const std::vector<std::string>& solvers);

}  // namespace floatdv
