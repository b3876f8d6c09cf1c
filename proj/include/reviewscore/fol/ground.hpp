#pragma once

#include <cstdint>
#include <vector>

#include "reviewscore/fol/ast.hpp"
#include "reviewscore/fol/parse.hpp"

// Closed-domain grounding: quantifiers range over the finite set of constants
// mentioned anywhere in the argument (one fresh constant is injected when
// none occur), turning the entailment question into a propositional one.
namespace reviewscore::fol {

struct DomainTooLarge : FolError {
  using FolError::FolError;
};

struct GroundOptions {
  std::uint64_t max_instances = 1'000'000;  // bound on |constants|^(max quantifier nesting)
};

// Scan a formula set for constants and predicate arities. Throws ArityError
// when a predicate is used with two arities across the set.
Signature infer_signature(const std::vector<FormulaPtr>& formulas);

// Ensure the constant set is non-empty: inject a fresh constant (c0, c1, ...
// first name unused by any symbol) when no constant occurs.
void ensure_domain(Signature& sig);

// Expand forall to a conjunction and exists to a disjunction over
// sig.constants. The result is quantifier-free with constant-only atoms.
FormulaPtr ground_formula(const FormulaPtr& f, const Signature& sig, const GroundOptions& opts = {});

std::pair<std::vector<FormulaPtr>, FormulaPtr> ground(const std::vector<FormulaPtr>& premises,
                                                      const FormulaPtr& conclusion, const Signature& sig,
                                                      const GroundOptions& opts = {});

}  // namespace reviewscore::fol
