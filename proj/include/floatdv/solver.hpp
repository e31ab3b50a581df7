#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "floatdv/interpreter.hpp"
#include "floatdv/smt_emit.hpp"

namespace floatdv {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  std::string name;
  std::string path;  // executable; relative paths resolve against the config file
  /// Arguments with `{file}`, `{timeout}` (seconds) and `{timeout_ms}` placeholders.
  std::vector<std::string> args;
  bool supportsQuantifiers = true;
  double timeoutSeconds = 300;
};

/// z3, cvc5 and mathsat with their usual command lines.
std::vector<SolverConfig> default_solver_configs();

/// Reads `{"solvers": [{name, path, args, supportsQuantifiers, timeoutSeconds}]}`.
std::vector<SolverConfig> load_solver_configs(const std::string& file);

/// Config from `explicit_path`, else $FLOATDV_CONFIG, else the bundled
/// config/solvers.json, else the defaults.
std::vector<SolverConfig> resolve_solver_configs(const std::string& explicit_path = {});

bool solver_available(const SolverConfig& cfg);

/// Point values of an uninterpreted function as printed by the solver.
struct FunctionTable {
  std::vector<std::pair<FpLiteral, FpLiteral>> points;
  std::optional<FpLiteral> otherwise;
};

struct Model {
  Assignment values;
  std::map<std::string, FunctionTable> functions;
};

/// Reads a get-model response (`(define-fun x () Float64 v)` lists, with or
/// without a leading `model`) or a get-value response (`((x v) ...)`).
/// When `declared` is given, symbols outside it are dropped.
Model parse_model(std::string_view text, const std::vector<std::string>* declared = nullptr);

enum class Outcome { Valid, Invalid, Unknown, Timeout, Skipped, Error };
std::string_view outcome_name(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::Error;
  std::optional<Model> model;  // only for Invalid
  double wallTimeSeconds = 0;
  std::string solverName;
  std::string goalName;
  std::string message;         // error text, parse problems
  std::optional<ReplayStatus> replay;
  std::string replayDetail;
};

struct RunOptions {
  double graceSeconds = 2;
  /// Directory for the temporary query file; empty uses $TMPDIR.
  std::string workDir;
};

Verdict run_solver(const SmtDocument& doc, const SolverConfig& cfg, const RunOptions& opts = {});

/// Interprets raw solver output. Exposed for tests.
Verdict classify_output(const SmtDocument& doc, const SolverConfig& cfg, const std::string& out, const std::string& err,
                        int exitCode, double seconds);

enum class Aggregate {
  Valid,
  Refuted,       // counterexample confirmed by replay
  Invalid,       // counterexample not confirmed (spurious, inconclusive or not replayed)
  Unknown,
  Timeout,
  Skipped,
  Error,
  Conflict,      // one solver proved the goal, another refuted it concretely
};
std::string_view aggregate_name(Aggregate a);

/// Order-independent combination of per-solver verdicts.
Aggregate aggregate(const std::vector<Verdict>& verdicts);

struct AggregatedVerdict {
  Aggregate outcome = Aggregate::Error;
  std::vector<Verdict> perSolver;  // in config order
};

using ReplayHook = std::function<std::pair<ReplayStatus, std::string>(const Model&)>;

/// Runs every configured solver on the obligation and aggregates. Invalid
/// verdicts with a model are classified through `replay` when given.
AggregatedVerdict decide(const ProofObligation& po, const std::vector<SolverConfig>& cfgs, const EmitOptions& opts,
                         const ReplayHook& replay = {}, bool concurrent = false, const RunOptions& run = {});
AggregatedVerdict decide(const SmtDocument& doc, const std::vector<SolverConfig>& cfgs, const ReplayHook& replay = {},
                         bool concurrent = false, const RunOptions& run = {});

}  // namespace floatdv
