#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "floatdv/ast.hpp"
#include "floatdv/term.hpp"

namespace floatdv {

class VcError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VcOptions {
  int inlineDepth = 8;
  bool splitGoals = true;  // one obligation per ensures conjunct and per loop premise
};

/// A library-function application reachable in an obligation.
struct Occurrence {
  Fn fn;
  Term arg;
  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

struct Provenance {
  std::string method;
  int contract = 0;  // 1-based, as printed in reports
  std::string path;  // e.g. "return@12 via then@9"
};

struct ProofObligation {
  std::string name;  // file-name safe: post1, loop1.init, ...
  std::vector<Term> hypotheses;
  Term goal;
  Provenance provenance;
  std::vector<Occurrence> occurrences;

  /// hypotheses => goal as a single closed formula.
  Term formula() const;
};

/// Applications of sin/cos/atan/sqrt in `terms`, deduplicated, in
/// first-seen pre-order.
std::vector<Occurrence> collect_occurrences(const std::vector<Term>& terms);

/// Returns `m` with every call to a user method replaced by the callee's
/// body. Callee parameters and locals are renamed `name$k` and results go
/// through a fresh `callee$ret$k` local. Builtin calls stay.
/// Throws VcError on recursion, on nesting deeper than `depth`, and on calls
/// in loop conditions.
minif::MethodDecl inline_calls(const minif::TypedProgram& p, const minif::MethodDecl& m, int depth);

/// Weakest precondition of a loop-free, call-free method body against
/// `post`, whose free variables name inputs (`x`, `r.f`, `a[0]`) and
/// `\result` (or `\result.f`, `\result[0]`).
Term wp(const minif::TypedProgram& p, const minif::MethodDecl& m, const Term& post);

/// Obligations for contract `contract` (0-based) of `method`.
std::vector<ProofObligation> generate_obligations(const minif::TypedProgram& p, std::string_view method, int contract,
                                                  const VcOptions& opts = {});

/// Debug dump: [{name, method, contract, path, hypotheses, goal, occurrences}].
std::string obligations_to_json(const std::vector<ProofObligation>& obligations);

/// Symbol names for the inputs of `m`, in parameter order, with sorts.
std::vector<std::pair<std::string, Sort>> input_symbols(const minif::TypedProgram& p, const minif::MethodDecl& m);

}  // namespace floatdv
