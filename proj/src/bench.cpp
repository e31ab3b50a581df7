#include "floatdv/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "floatdv/interpreter.hpp"
#include "floatdv/parser.hpp"
#include "floatdv/typecheck.hpp"

#ifndef FLOATDV_DEFAULT_CORPUS
#define FLOATDV_DEFAULT_CORPUS ""
#endif

namespace floatdv {

namespace fs = std::filesystem;
using json = nlohmann::json;

bool BenchmarkCase::has_tag(std::string_view t) const {
  return std::find(tags.begin(), tags.end(), t) != tags.end();
}

std::string default_corpus_dir() {
  if (const char* env = std::getenv("FLOATDV_CORPUS"); env && *env) return env;
  return FLOATDV_DEFAULT_CORPUS;
}

Corpus load_corpus(const std::string& manifest) {
  std::ifstream in(manifest);
  if (!in) throw CorpusError("cannot read corpus manifest " + manifest);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw CorpusError(manifest + ": " + e.what());
  }
  Corpus c;
  c.root = fs::absolute(fs::path(manifest)).parent_path().string();
  try {
    for (const auto& e : j.at("cases")) {
      BenchmarkCase b;
      b.name = e.at("name").get<std::string>();
      b.file = (fs::path(c.root) / e.at("file").get<std::string>()).lexically_normal().string();
      b.method = e.at("method").get<std::string>();
      b.contract = e.value("contract", 1);
      b.expected = e.at("expected").get<std::string>();
      b.tags = e.value("tags", std::vector<std::string>{});
      b.suites = e.value("suites", std::vector<std::string>{});
      if (b.expected != "valid" && b.expected != "invalid") throw CorpusError(b.name + ": expected must be valid or invalid");
      if (b.contract < 1) throw CorpusError(b.name + ": contract numbers start at 1");
      c.cases.push_back(std::move(b));
    }
  } catch (const json::exception& e) {
    throw CorpusError(manifest + ": " + e.what());
  }
  return c;
}

std::vector<BenchmarkCase> suite_cases(const Corpus& c, std::string_view suite) {
  if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end())
    throw CorpusError("unknown suite '" + std::string(suite) + "'");
  std::vector<BenchmarkCase> out;
  for (const auto& b : c.cases)
    if (suite == "all" || std::find(b.suites.begin(), b.suites.end(), suite) != b.suites.end()) out.push_back(b);
  return out;
}

std::string_view case_verdict_name(CaseVerdict v) {
  switch (v) {
    case CaseVerdict::Valid: return "valid";
    case CaseVerdict::Refuted: return "refuted";
    case CaseVerdict::Open: return "open";
    case CaseVerdict::Error: return "error";
  }
  return "?";
}

CaseVerdict combine_goals(const std::vector<GoalRecord>& goals) {
  bool all_valid = true, refuted = false;
  for (const auto& g : goals) {
    const Aggregate a = g.verdict.outcome;
    if (a == Aggregate::Conflict) return CaseVerdict::Error;
    if (a == Aggregate::Refuted) refuted = true;
    if (a != Aggregate::Valid) all_valid = false;
  }
  if (refuted) return CaseVerdict::Refuted;
  return all_valid ? CaseVerdict::Valid : CaseVerdict::Open;
}

std::string benchmark_stem(const std::string& name) {
  const auto paren = name.find('(');
  return paren == std::string::npos ? name : name.substr(0, paren);
}

std::string smt_file_name(const std::string& benchmark, int contract, const std::string& goal) {
  std::string stem = benchmark_stem(benchmark);
  for (char& ch : stem)
    if (ch == '/' || ch == ' ') ch = '_';
  return stem + "." + std::to_string(contract) + "." + goal + ".smt2";
}

namespace {

struct Prepared {
  std::shared_ptr<const minif::TypedProgram> program;
  const minif::MethodDecl* method = nullptr;
  std::vector<ProofObligation> obligations;
};

Prepared prepare(const BenchmarkCase& b, const ExperimentOptions& opts) {
  Prepared p;
  auto tp = std::make_shared<minif::TypedProgram>(minif::typecheck(minif::parse_file(b.file)));
  p.method = tp->program.find_method(b.method);
  if (!p.method) throw CorpusError(b.file + ": no method '" + b.method + "'");
  if (b.contract > static_cast<int>(p.method->contracts.size()))
    throw CorpusError(b.name + ": method has " + std::to_string(p.method->contracts.size()) + " contract(s)");
  p.obligations = generate_obligations(*tp, b.method, b.contract - 1, opts.vc);
  p.program = std::move(tp);
  return p;
}

std::vector<SolverConfig> available_solvers(const std::vector<SolverConfig>& all) {
  std::vector<SolverConfig> out;
  for (const auto& s : all)
    if (solver_available(s)) out.push_back(s);
  return out;
}

void solve_goal(const Prepared& prep, const BenchmarkCase& b, const ExperimentOptions& opts,
                const std::vector<SolverConfig>& solvers, GoalRecord& g) {
  const SmtDocument doc = emit_smt(g.obligation, opts.emit);
  if (!opts.emitDir.empty()) {
    fs::create_directories(opts.emitDir);
    g.smtFile = (fs::path(opts.emitDir) / smt_file_name(b.name, b.contract, g.obligation.name)).string();
    std::ofstream(g.smtFile) << doc.text;
  }
  const bool sqrt_axioms = opts.emit.sqrtMode == SqrtMode::Axioms;
  const int contract = b.contract - 1;
  ReplayHook hook = [&prep, contract, sqrt_axioms](const Model& m) {
    const ReplayResult r = replay(*prep.program, *prep.method, contract, m.values, sqrt_axioms);
    std::string detail = r.detail;
    if (!r.missing.empty()) detail += " (unassigned inputs defaulted: " + std::to_string(r.missing.size()) + ")";
    return std::make_pair(r.status, detail);
  };
  g.verdict = decide(doc, solvers, hook, opts.concurrentSolvers);
  if (opts.trace) {
    for (const auto& v : g.verdict.perSolver) {
      if (v.replay != ReplayStatus::Confirmed) continue;
      g.trace = replay(*prep.program, *prep.method, contract, v.model->values, sqrt_axioms, true).trace;
      break;
    }
  }
}

void finish(CaseResult& r) {
  if (!r.error.empty()) {
    r.verdict = CaseVerdict::Error;
    r.conforms = false;
    return;
  }
  r.verdict = combine_goals(r.goals);
  for (const auto& g : r.goals)
    if (g.verdict.outcome == Aggregate::Conflict)
      r.error = "soundness conflict on " + g.obligation.name + ": one solver proved the goal, another refuted it";
  r.conforms = (r.bench.expected == "valid" && r.verdict == CaseVerdict::Valid) ||
               (r.bench.expected == "invalid" && r.verdict == CaseVerdict::Refuted);
}

}  // namespace

CaseResult run_case(const BenchmarkCase& bench, const ExperimentOptions& opts, const ProgressFn& progress) {
  return run_cases({bench}, opts, progress).front();
}

std::vector<CaseResult> run_cases(const std::vector<BenchmarkCase>& cases, const ExperimentOptions& opts,
                                  const ProgressFn& progress) {
  const std::vector<SolverConfig> solvers = available_solvers(opts.solvers);
  std::vector<CaseResult> results(cases.size());
  std::vector<Prepared> prepared(cases.size());
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    results[i].bench = cases[i];
    if (solvers.empty()) {
      results[i].error = "no configured solver is available";
      continue;
    }
    try {
      prepared[i] = prepare(cases[i], opts);
    } catch (const minif::FrontendError& e) {
      results[i].error = e.what();
      continue;
    } catch (const std::exception& e) {
      results[i].error = e.what();
      continue;
    }
    for (std::size_t k = 0; k < prepared[i].obligations.size(); ++k) {
      GoalRecord g;
      g.obligation = prepared[i].obligations[k];
      results[i].goals.push_back(std::move(g));
      tasks.emplace_back(i, k);
    }
  }

  std::mutex mu;
  auto work = [&](std::size_t t) {
    const auto [i, k] = tasks[t];
    GoalRecord& g = results[i].goals[k];
    try {
      solve_goal(prepared[i], cases[i], opts, solvers, g);
    } catch (const std::exception& e) {
      std::lock_guard lock(mu);
      results[i].error = g.obligation.name + ": " + e.what();
      return;
    }
    if (progress) {
      std::lock_guard lock(mu);
      progress(results[i], g);
    }
  };
  const int jobs = std::max(1, opts.jobs);
  if (jobs == 1 || tasks.size() < 2) {
    for (std::size_t t = 0; t < tasks.size(); ++t) work(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < std::min<int>(jobs, static_cast<int>(tasks.size())); ++w)
      pool.emplace_back([&] {
        for (std::size_t t; (t = next++) < tasks.size();) work(t);
      });
    for (auto& th : pool) th.join();
  }
  for (auto& r : results) finish(r);
  return results;
}

// ---------------------------------------------------------------------------
// Reports

ReportFormat parse_report_format(std::string_view s) {
  if (s == "md" || s == "markdown") return ReportFormat::Markdown;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  throw std::invalid_argument("unknown report format '" + std::string(s) + "' (md, csv or json)");
}

namespace {

double millis(double s) { return std::round(s * 1000.0) / 1000.0; }

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string fixed1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

bool decided(const Verdict& v) {
  return v.outcome == Outcome::Valid || (v.outcome == Outcome::Invalid && v.replay == ReplayStatus::Confirmed);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string goal_list(const ReportRow& r) {
  std::string s;
  for (const auto& [goal, verdict] : r.goalVerdicts) {
    if (!s.empty()) s += ";";
    s += goal + "=" + verdict;
  }
  return s;
}

std::string render_markdown(const ReportTable& t) {
  std::ostringstream o;
  o << "# floatdv report\n\n";
  o << "- suite: " << t.meta.suite << "\n";
  o << "- trans-mode: " << t.meta.transMode << "\n";
  o << "- sqrt-mode: " << t.meta.sqrtMode << "\n";
  o << "- quantifiers: " << (t.meta.backgroundQuantifiers ? "on" : "off") << "\n";
  o << "- timeout: " << fixed1(t.meta.timeout) << " s\n";
  o << "- seed: " << t.meta.seed << "\n\n";
  o << "| benchmark | # goals | expected | verdict |";
  for (const auto& s : t.solvers) o << " " << s << " decided | " << s << " avg. | " << s << " max. |";
  o << "\n|---|---:|---|---|";
  for (std::size_t i = 0; i < t.solvers.size(); ++i) o << "---:|---:|---:|";
  o << "\n";
  for (const auto& r : t.rows) {
    o << "| " << r.benchmark << " | " << r.goals << " | " << r.expected << " | " << r.verdict << (r.conforms ? "" : " (!)") << " |";
    for (const auto& c : r.cells) {
      if (!c.available) {
        o << " n/a | n/a | n/a |";
        continue;
      }
      o << " " << c.decided << " | " << (c.avg ? fixed1(*c.avg) : "-") << " | "
        << (c.timeout ? "TO" : c.max ? fixed1(*c.max) : "-") << " |";
    }
    o << "\n";
  }
  bool any_goal = false;
  for (const auto& r : t.rows) any_goal = any_goal || !r.goalVerdicts.empty() || !r.error.empty();
  if (any_goal) {
    o << "\n## Goals\n\n";
    for (const auto& r : t.rows) {
      o << "- " << r.benchmark << ":";
      if (!r.error.empty()) o << " error: " << r.error;
      for (const auto& [goal, verdict] : r.goalVerdicts) o << " " << goal << "=" << verdict;
      o << "\n";
    }
  }
  return o.str();
}

std::string render_csv(const ReportTable& t) {
  std::ostringstream o;
  o << "benchmark,goals,expected,verdict,conforms";
  for (const auto& s : t.solvers) o << "," << s << "_decided," << s << "_avg," << s << "_max";
  o << ",goal_verdicts,error\n";
  for (const auto& r : t.rows) {
    o << csv_field(r.benchmark) << "," << r.goals << "," << r.expected << "," << r.verdict << "," << (r.conforms ? "true" : "false");
    for (const auto& c : r.cells) {
      if (!c.available) {
        o << ",n/a,n/a,n/a";
        continue;
      }
      o << "," << c.decided << "," << (c.avg ? fixed3(*c.avg) : "") << "," << (c.timeout ? "TO" : c.max ? fixed3(*c.max) : "");
    }
    o << "," << csv_field(goal_list(r)) << "," << csv_field(r.error) << "\n";
  }
  return o.str();
}

std::string render_json(const ReportTable& t) {
  json j;
  j["schema"] = "floatdv-report/1";
  j["meta"] = {{"suite", t.meta.suite},
               {"transMode", t.meta.transMode},
               {"sqrtMode", t.meta.sqrtMode},
               {"backgroundQuantifiers", t.meta.backgroundQuantifiers},
               {"timeout", t.meta.timeout},
               {"seed", t.meta.seed}};
  j["solvers"] = t.solvers;
  j["rows"] = json::array();
  for (const auto& r : t.rows) {
    json row{{"benchmark", r.benchmark}, {"goals", r.goals},       {"expected", r.expected},
             {"verdict", r.verdict},     {"conforms", r.conforms}, {"error", r.error}};
    json cells = json::object();
    for (std::size_t i = 0; i < t.solvers.size(); ++i) {
      const SolverCell& c = r.cells[i];
      json cell{{"available", c.available}, {"decided", c.decided}, {"skipped", c.skipped}, {"timeout", c.timeout}};
      cell["avg"] = c.avg ? json(*c.avg) : json(nullptr);
      cell["max"] = c.max ? json(*c.max) : json(nullptr);
      cells[t.solvers[i]] = std::move(cell);
    }
    row["solvers"] = std::move(cells);
    json goals = json::array();
    for (const auto& [goal, verdict] : r.goalVerdicts) goals.push_back({{"goal", goal}, {"verdict", verdict}});
    row["goalVerdicts"] = std::move(goals);
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

}  // namespace

ReportTable build_report(const std::vector<CaseResult>& results, const ExperimentOptions& opts, const std::string& suite) {
  ReportTable t;
  t.meta.suite = suite;
  t.meta.transMode = std::string(trans_mode_name(opts.emit.transMode));
  t.meta.sqrtMode = std::string(sqrt_mode_name(opts.emit.sqrtMode));
  t.meta.backgroundQuantifiers = opts.emit.backgroundQuantifiers;
  t.meta.seed = opts.seed;
  for (const auto& s : opts.solvers) {
    t.solvers.push_back(s.name);
    t.meta.timeout = std::max(t.meta.timeout, s.timeoutSeconds);
  }
  for (const auto& r : results) {
    ReportRow row;
    row.benchmark = r.bench.name;
    row.goals = static_cast<int>(r.goals.size());
    row.expected = r.bench.expected;
    row.verdict = std::string(case_verdict_name(r.verdict));
    row.conforms = r.conforms;
    row.error = r.error;
    for (const auto& g : r.goals) row.goalVerdicts.emplace_back(g.obligation.name, std::string(aggregate_name(g.verdict.outcome)));
    for (const auto& s : opts.solvers) {
      SolverCell c;
      c.available = solver_available(s);
      double sum = 0;
      int n = 0;
      for (const auto& g : r.goals) {
        for (const auto& v : g.verdict.perSolver) {
          if (v.solverName != s.name) continue;
          if (v.outcome == Outcome::Skipped) {
            ++c.skipped;
            continue;
          }
          if (v.outcome == Outcome::Timeout) {
            c.timeout = true;
            continue;
          }
          if (!decided(v)) continue;
          ++c.decided;
          sum += v.wallTimeSeconds;
          ++n;
          c.max = std::max(c.max.value_or(0.0), millis(v.wallTimeSeconds));
        }
      }
      if (n > 0) c.avg = millis(sum / n);
      row.cells.push_back(c);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string render_report(const ReportTable& t, ReportFormat fmt) {
  switch (fmt) {
    case ReportFormat::Markdown: return render_markdown(t);
    case ReportFormat::Csv: return render_csv(t);
    case ReportFormat::Json: return render_json(t);
  }
  return {};
}

std::string runtimes_csv(const std::vector<CaseResult>& results, const std::vector<std::string>& solvers) {
  std::ostringstream o;
  o << "solver,rank,seconds,benchmark,goal\n";
  for (const auto& s : solvers) {
    std::vector<std::tuple<double, std::string, std::string>> rows;
    for (const auto& r : results)
      for (const auto& g : r.goals)
        for (const auto& v : g.verdict.perSolver)
          if (v.solverName == s && decided(v)) rows.emplace_back(millis(v.wallTimeSeconds), r.bench.name, g.obligation.name);
    std::sort(rows.begin(), rows.end());
    int rank = 0;
    for (const auto& [sec, bench, goal] : rows) o << s << "," << ++rank << "," << fixed3(sec) << "," << csv_field(bench) << "," << goal << "\n";
  }
  return o.str();
}

}  // namespace floatdv
