#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "floatdv/ast.hpp"
#include "floatdv/term.hpp"

namespace floatdv {

class InterpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The precondition rejected too many samples.
class SamplingGiveUp : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Concrete value of any MiniF type: one slot for scalars, one per field or
/// element for records and arrays. Floats are kept as exact bit patterns.
struct ConcreteValue {
  minif::Type type;
  std::vector<Value> parts;

  const Value& scalar() const { return parts.front(); }
  friend bool operator==(const ConcreteValue&, const ConcreteValue&) = default;
};

using Inputs = std::map<std::string, ConcreteValue>;

/// Human-readable value: decimal plus hex bits for floats.
std::string format_value(const Value& v);
std::string format_value(const ConcreteValue& v, const minif::Program& p);

struct ExecResult {
  ConcreteValue result;
  std::vector<std::string> trace;  // filled when tracing
};

/// Runs `m` with IEEE-754 RNE semantics in each operand's format. Calls to
/// user methods are executed, library functions go through `fns`.
ExecResult eval_method(const minif::TypedProgram& p, const minif::MethodDecl& m, const Inputs& inputs, bool trace = false,
                       const FnInterpretation& fns = host_library);

struct ContractCheck {
  bool pre = false;
  std::optional<bool> post;  // absent when pre is false
  std::optional<ConcreteValue> result;
};

ContractCheck check_contract(const minif::TypedProgram& p, const minif::MethodDecl& m, int contract, const Inputs& inputs,
                             const FnInterpretation& fns = host_library);

/// `n` inputs satisfying the requires clause of `contract`, by rejection
/// sampling guided by literal bounds found in the clause. Throws
/// SamplingGiveUp after 1000*n rejections.
std::vector<Inputs> random_inputs(const minif::TypedProgram& p, const minif::MethodDecl& m, int contract, int n,
                                  std::uint64_t seed);

struct Counterexample {
  Inputs inputs;
  ConcreteValue result;
  std::vector<std::string> trace;
  int trial = 0;
};

/// First sampled input that satisfies requires and violates ensures.
std::optional<Counterexample> falsify(const minif::TypedProgram& p, const minif::MethodDecl& m, int contract, int trials,
                                      std::uint64_t seed);

/// Inputs from a flat symbol assignment (`x`, `r.f`, `a[0]`). Slots the
/// assignment omits are set to +0.0 / false / 0 and listed in `missing`.
Inputs inputs_from_assignment(const minif::TypedProgram& p, const minif::MethodDecl& m, const Assignment& values,
                              std::vector<std::string>* missing = nullptr);

enum class ReplayStatus { Confirmed, Spurious, Inconclusive };
std::string_view replay_status_name(ReplayStatus s);

struct ReplayResult {
  ReplayStatus status = ReplayStatus::Spurious;
  Inputs inputs;
  ContractCheck check;
  std::vector<std::string> missing;
  std::vector<std::string> trace;
  std::string detail;
};

/// Runs the method on a solver model. A violated contract is Confirmed. If
/// the contract holds, the model is Spurious for arithmetic-only code and
/// Inconclusive when the method depends on library functions the solver
/// only knew through axioms (sin, cos, atan, and sqrt when axiomatized).
ReplayResult replay(const minif::TypedProgram& p, const minif::MethodDecl& m, int contract, const Assignment& model,
                    bool sqrt_axiomatized, bool trace = false);

/// True if `m` or anything it calls applies sin, cos or atan (or sqrt, when
/// `count_sqrt`).
bool uses_library_functions(const minif::TypedProgram& p, const minif::MethodDecl& m, bool count_sqrt);

}  // namespace floatdv
