#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "floatdv/sexpr.hpp"
#include "floatdv/vcgen.hpp"

namespace floatdv {

enum class TransMode { SmtAxioms, GroundInst };
enum class SqrtMode { Builtin, Axioms };

std::string_view trans_mode_name(TransMode m);  // smt-axioms | ground-inst
std::string_view sqrt_mode_name(SqrtMode m);    // builtin | axioms
TransMode parse_trans_mode(std::string_view s);
SqrtMode parse_sqrt_mode(std::string_view s);

struct EmitOptions {
  TransMode transMode = TransMode::GroundInst;
  SqrtMode sqrtMode = SqrtMode::Builtin;
  bool backgroundQuantifiers = false;
  std::string logic;  // empty: QF_FP when possible, ALL otherwise
  bool produceModel = true;
  /// Arithmetic as uninterpreted functions, for code that is not strictfp.
  bool nonStrict = false;
  /// Restrict axioms to these schema ids; empty means all.
  std::vector<std::string> axiomFilter;
};

struct SmtDocument {
  std::string text;
  std::string goalName;
  std::vector<std::string> declaredSymbols;  // obligation constants, unquoted
  std::string logic;
  bool hasQuantifiers = false;
};

SmtDocument emit_smt(const ProofObligation& po, const EmitOptions& opts = {});

/// `(fp #bS #bE #bM)` for finite values including zeros; `(_ NaN e s)`,
/// `(_ +oo e s)`, `(_ -oo e s)` for the specials.
std::string format_fp_literal(const FpLiteral& lit);

/// Reads any SMT-LIB spelling of a float constant: bit triple (with #b or
/// #x fields), or the indexed NaN / +oo / -oo / +zero / -zero constants.
/// Throws LiteralError on anything else.
FpLiteral parse_fp_literal(std::string_view text);
/// Same, on an already parsed expression; nullopt if it is not a float constant.
std::optional<FpLiteral> fp_literal_from_sexpr(const Sexpr& e);

/// Symbol as written in documents: always |quoted|.
std::string smt_symbol(std::string_view name);

}  // namespace floatdv
