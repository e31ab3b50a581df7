#include "floatdv/solver.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "floatdv/process.hpp"

#ifndef FLOATDV_DEFAULT_CONFIG
#define FLOATDV_DEFAULT_CONFIG ""
#endif

namespace floatdv {

namespace fs = std::filesystem;

std::vector<SolverConfig> default_solver_configs() {
  return {
      {"z3", "z3", {"-smt2", "-T:{timeout}", "{file}"}, true, 300},
      {"cvc5", "cvc5", {"--lang=smt2", "--tlimit={timeout_ms}", "{file}"}, true, 300},
      {"mathsat", "mathsat", {"-input=smt2", "{file}"}, false, 300},
  };
}

std::vector<SolverConfig> load_solver_configs(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read solver config " + file);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(file + ": " + e.what());
  }
  if (!j.contains("solvers") || !j["solvers"].is_array()) throw ConfigError(file + ": expected a \"solvers\" array");
  const fs::path base = fs::absolute(fs::path(file)).parent_path();
  std::vector<SolverConfig> out;
  for (const auto& s : j["solvers"]) {
    SolverConfig c;
    try {
      c.name = s.at("name").get<std::string>();
      c.path = s.at("path").get<std::string>();
      c.args = s.value("args", std::vector<std::string>{"{file}"});
      c.supportsQuantifiers = s.value("supportsQuantifiers", true);
      c.timeoutSeconds = s.value("timeoutSeconds", 300.0);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(file + ": " + e.what());
    }
    if (c.timeoutSeconds <= 0) throw ConfigError(file + ": timeout of '" + c.name + "' must be positive");
    if (c.path.find('/') != std::string::npos && fs::path(c.path).is_relative()) c.path = (base / c.path).lexically_normal().string();
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<SolverConfig> resolve_solver_configs(const std::string& explicit_path) {
  if (!explicit_path.empty()) return load_solver_configs(explicit_path);
  if (const char* env = std::getenv("FLOATDV_CONFIG"); env && *env) return load_solver_configs(env);
  const std::string bundled = FLOATDV_DEFAULT_CONFIG;
  if (!bundled.empty() && fs::exists(bundled)) return load_solver_configs(bundled);
  return default_solver_configs();
}

bool solver_available(const SolverConfig& cfg) { return !find_executable(cfg.path).empty(); }

// ---------------------------------------------------------------------------
// Models

namespace {

std::optional<Value> value_from_sexpr(const Sexpr& e) {
  if (auto l = fp_literal_from_sexpr(e)) return Value{*l};
  if (e.is_atom("true")) return Value{true};
  if (e.is_atom("false")) return Value{false};
  auto numeral = [](const Sexpr& a) -> std::optional<std::int64_t> {
    if (a.is_list || a.quoted || a.atom.empty()) return std::nullopt;
    if (!std::all_of(a.atom.begin(), a.atom.end(), [](char c) { return c >= '0' && c <= '9'; })) return std::nullopt;
    try {
      return std::stoll(a.atom);
    } catch (...) {
      return std::nullopt;
    }
  };
  if (auto n = numeral(e)) return Value{*n};
  if (e.is_list && e.items.size() == 2 && e.items[0].is_atom("-"))
    if (auto n = numeral(e.items[1])) return Value{-*n};
  return std::nullopt;
}

bool is_fp_sort(const Sexpr& s) {
  if (!s.is_list) return s.atom == "Float64" || s.atom == "Float32" || s.atom == "Float16" || s.atom == "Float128";
  return s.items.size() == 4 && s.items[0].is_atom("_") && s.items[1].is_atom("FloatingPoint");
}

// (ite (= x lit) val rest) chains, in either argument order of `=`.
void read_table(const Sexpr& body, const std::string& param, FunctionTable& t) {
  const Sexpr* cur = &body;
  while (cur->is_list && cur->items.size() == 4 && cur->items[0].is_atom("ite")) {
    const Sexpr& c = cur->items[1];
    if (!c.is_list || c.items.size() != 3 || !(c.items[0].is_atom("=") || c.items[0].is_atom("fp.eq"))) return;
    const bool param_first = !c.items[1].is_list && c.items[1].atom == param;
    const Sexpr& key_expr = param_first ? c.items[2] : c.items[1];
    auto key = fp_literal_from_sexpr(key_expr);
    auto val = fp_literal_from_sexpr(cur->items[2]);
    if (!key || !val) return;
    t.points.emplace_back(*key, *val);
    cur = &cur->items[3];
  }
  t.otherwise = fp_literal_from_sexpr(*cur);
}

void read_define(const Sexpr& d, Model& m, const std::vector<std::string>* declared) {
  if (d.items.size() != 5 || d.items[1].is_list) return;
  const std::string& name = d.items[1].atom;
  const Sexpr& params = d.items[2];
  if (!params.is_list) return;
  if (params.items.empty()) {
    if (declared && std::find(declared->begin(), declared->end(), name) == declared->end()) return;
    auto v = value_from_sexpr(d.items[4]);
    if (!v) {
      if (is_fp_sort(d.items[3])) throw ModelError("cannot read the value of '" + name + "': " + d.items[4].str());
      return;
    }
    m.values[name] = *v;
    return;
  }
  if (params.items.size() == 1 && params.items[0].is_list && params.items[0].items.size() == 2 && is_fp_sort(d.items[3])) {
    FunctionTable t;
    read_table(d.items[4], params.items[0].items[0].atom, t);
    if (!t.points.empty() || t.otherwise) m.functions[name] = std::move(t);
  }
}

void visit(const Sexpr& e, Model& m, const std::vector<std::string>* declared) {
  if (!e.is_list || e.items.empty()) return;
  if (e.items[0].is_atom("define-fun")) {
    read_define(e, m, declared);
    return;
  }
  for (const auto& item : e.items) {
    if (!item.is_list) continue;
    if (item.items.size() == 2 && !item.items[0].is_list && !item.items[0].is_atom("define-fun")) {
      // get-value pair
      const std::string& name = item.items[0].atom;
      if (declared && std::find(declared->begin(), declared->end(), name) == declared->end()) continue;
      if (auto v = value_from_sexpr(item.items[1])) m.values[name] = *v;
      continue;
    }
    visit(item, m, declared);
  }
}

}  // namespace

Model parse_model(std::string_view text, const std::vector<std::string>* declared) {
  std::vector<Sexpr> top;
  try {
    top = parse_sexprs(text);
  } catch (const SexprError& e) {
    throw ModelError(std::string("malformed model: ") + e.what());
  } catch (const LiteralError& e) {
    throw ModelError(std::string("malformed model: ") + e.what());
  }
  Model m;
  try {
    for (const auto& e : top) {
      if (e.is_list && !e.items.empty() && e.items[0].is_atom("error")) continue;
      if (e.is_list && !e.items.empty() && e.items[0].is_atom("define-fun")) read_define(e, m, declared);
      else visit(e, m, declared);
    }
  } catch (const LiteralError& e) {
    throw ModelError(std::string("bad literal in model: ") + e.what());
  }
  return m;
}

// ---------------------------------------------------------------------------
// Running

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Valid: return "valid";
    case Outcome::Invalid: return "invalid";
    case Outcome::Unknown: return "unknown";
    case Outcome::Timeout: return "timeout";
    case Outcome::Skipped: return "skipped";
    case Outcome::Error: return "error";
  }
  return "?";
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string expand(const std::string& arg, const std::string& file, double timeout) {
  std::string out = arg;
  auto replace = [&](const std::string& key, const std::string& value) {
    for (std::size_t pos; (pos = out.find(key)) != std::string::npos;) out.replace(pos, key.size(), value);
  };
  replace("{file}", file);
  replace("{timeout_ms}", std::to_string(static_cast<long long>(timeout * 1000)));
  replace("{timeout}", std::to_string(std::max(1LL, static_cast<long long>(timeout + 0.999))));
  return out;
}

std::string excerpt(const std::string& out, const std::string& err) {
  std::string s = trim(out + (err.empty() ? "" : "\n" + err));
  if (s.size() > 400) s = s.substr(0, 400) + "...";
  return s;
}

}  // namespace

Verdict classify_output(const SmtDocument& doc, const SolverConfig& cfg, const std::string& out, const std::string& err,
                        int exitCode, double seconds) {
  Verdict v;
  v.solverName = cfg.name;
  v.goalName = doc.goalName;
  v.wallTimeSeconds = seconds;

  std::istringstream lines(out);
  std::string line;
  std::size_t consumed = 0;
  std::string answer;
  std::string errors;
  while (std::getline(lines, line)) {
    consumed += line.size() + 1;
    const std::string t = trim(line);
    if (t == "sat" || t == "unsat" || t == "unknown" || t == "timeout") {
      answer = t;
      break;
    }
    if (t.rfind("(error", 0) == 0) errors += t + "\n";
  }
  if (answer == "unsat") {
    v.outcome = Outcome::Valid;
  } else if (answer == "sat") {
    v.outcome = Outcome::Invalid;
    const std::string rest = consumed < out.size() ? out.substr(consumed) : std::string{};
    if (!trim(rest).empty()) {
      try {
        v.model = parse_model(rest, &doc.declaredSymbols);
      } catch (const ModelError& e) {
        v.message = e.what();
      }
    }
  } else if (answer == "timeout" || (answer == "unknown" && seconds >= 0.95 * cfg.timeoutSeconds)) {
    v.outcome = Outcome::Timeout;
  } else if (answer == "unknown") {
    v.outcome = Outcome::Unknown;
  } else {
    v.outcome = Outcome::Error;
    v.message = errors.empty() ? "no verdict (exit " + std::to_string(exitCode) + "): " + excerpt(out, err) : trim(errors);
  }
  return v;
}

Verdict run_solver(const SmtDocument& doc, const SolverConfig& cfg, const RunOptions& opts) {
  Verdict v;
  v.solverName = cfg.name;
  v.goalName = doc.goalName;
  if (doc.hasQuantifiers && !cfg.supportsQuantifiers) {
    v.outcome = Outcome::Skipped;
    v.message = "solver does not support quantifiers";
    return v;
  }
  if (!solver_available(cfg)) {
    v.outcome = Outcome::Error;
    v.message = "solver executable not found: " + cfg.path;
    return v;
  }

  std::string dir = opts.workDir;
  if (dir.empty()) dir = fs::temp_directory_path().string();
  std::string tmpl = dir + "/floatdv-XXXXXX.smt2";
  const int fd = ::mkstemps(tmpl.data(), 5);
  if (fd < 0) {
    v.outcome = Outcome::Error;
    v.message = "cannot create a temporary file in " + dir;
    return v;
  }
  ::close(fd);
  {
    std::ofstream f(tmpl);
    f << doc.text;
  }

  std::vector<std::string> argv{cfg.path};
  for (const auto& a : cfg.args) argv.push_back(expand(a, tmpl, cfg.timeoutSeconds));
  const ProcessResult r = run_process(argv, cfg.timeoutSeconds + opts.graceSeconds);
  std::error_code ec;
  fs::remove(tmpl, ec);

  if (r.startFailed) {
    v.outcome = Outcome::Error;
    v.message = r.err;
    return v;
  }
  if (r.timedOut) {
    v.outcome = Outcome::Timeout;
    v.wallTimeSeconds = r.seconds;
    return v;
  }
  return classify_output(doc, cfg, r.out, r.err, r.exitCode, r.seconds);
}

// ---------------------------------------------------------------------------
// Aggregation

std::string_view aggregate_name(Aggregate a) {
  switch (a) {
    case Aggregate::Valid: return "valid";
    case Aggregate::Refuted: return "refuted";
    case Aggregate::Invalid: return "invalid";
    case Aggregate::Unknown: return "unknown";
    case Aggregate::Timeout: return "timeout";
    case Aggregate::Skipped: return "skipped";
    case Aggregate::Error: return "error";
    case Aggregate::Conflict: return "conflict";
  }
  return "?";
}

Aggregate aggregate(const std::vector<Verdict>& verdicts) {
  bool valid = false, confirmed = false, invalid = false, unknown = false, timeout = false, error = false;
  for (const auto& v : verdicts) {
    switch (v.outcome) {
      case Outcome::Valid: valid = true; break;
      case Outcome::Invalid:
        if (v.replay == ReplayStatus::Confirmed) confirmed = true;
        else invalid = true;
        break;
      case Outcome::Unknown: unknown = true; break;
      case Outcome::Timeout: timeout = true; break;
      case Outcome::Error: error = true; break;
      case Outcome::Skipped: break;
    }
  }
  if (valid && confirmed) return Aggregate::Conflict;
  if (valid) return Aggregate::Valid;
  if (confirmed) return Aggregate::Refuted;
  if (invalid) return Aggregate::Invalid;
  if (timeout) return Aggregate::Timeout;
  if (unknown) return Aggregate::Unknown;
  if (error) return Aggregate::Error;
  return Aggregate::Skipped;
}

AggregatedVerdict decide(const ProofObligation& po, const std::vector<SolverConfig>& cfgs, const EmitOptions& opts,
                         const ReplayHook& replay, bool concurrent, const RunOptions& run) {
  return decide(emit_smt(po, opts), cfgs, replay, concurrent, run);
}

AggregatedVerdict decide(const SmtDocument& doc, const std::vector<SolverConfig>& cfgs, const ReplayHook& replay,
                         bool concurrent, const RunOptions& run) {
  if (cfgs.empty()) throw ConfigError("no solvers configured");
  AggregatedVerdict out;
  if (concurrent) {
    std::vector<std::future<Verdict>> jobs;
    for (const auto& c : cfgs) jobs.push_back(std::async(std::launch::async, [&doc, &c, &run] { return run_solver(doc, c, run); }));
    for (auto& j : jobs) out.perSolver.push_back(j.get());
  } else {
    for (const auto& c : cfgs) out.perSolver.push_back(run_solver(doc, c, run));
  }
  if (replay) {
    for (auto& v : out.perSolver) {
      if (v.outcome != Outcome::Invalid || !v.model) continue;
      auto [status, detail] = replay(*v.model);
      v.replay = status;
      v.replayDetail = std::move(detail);
    }
  }
  out.outcome = aggregate(out.perSolver);
  return out;
}

}  // namespace floatdv
