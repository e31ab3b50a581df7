#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "floatdv/term.hpp"
#include "floatdv/vcgen.hpp"

namespace floatdv {

/// One axiom over a library function, as a template in the variable `a`.
struct AxiomSchema {
  std::string id;  // e.g. sin.range
  Fn symbol;
  std::string text;  // prose form, as listed in docs/axioms.md
  Term tmpl;
};

/// The Float64 variable every template is stated over.
Term axiom_variable();

/// Schemas for one function, in catalog order.
std::vector<AxiomSchema> axiom_pack(Fn f);
/// Same, by name (sin, cos, atan, sqrt); throws std::invalid_argument otherwise.
std::vector<AxiomSchema> axiom_pack(std::string_view symbol);

/// Every schema of every pack (sin, cos, atan, sqrt).
std::vector<AxiomSchema> all_axioms();

/// forall a: Float64. template, one per schema.
std::vector<Term> quantified_axioms(const std::vector<AxiomSchema>& schemas);

/// template[a := arg] for each occurrence and each schema of its function,
/// without syntactic duplicates. Throws std::invalid_argument if an
/// occurrence's function has no schema in `schemas`.
std::vector<Term> ground_instances(const std::vector<AxiomSchema>& schemas, const std::vector<Occurrence>& occurrences);

/// Markdown catalog of all packs.
std::string axiom_catalog_markdown();

}  // namespace floatdv
