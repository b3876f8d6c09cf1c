#pragma once

#include <map>
#include <string>
#include <vector>

#include "reviewscore/fol/ground.hpp"
#include "reviewscore/fol/sat.hpp"

namespace reviewscore::fol {

struct NotValid : FolError {
  using FolError::FolError;
};

enum class ValidityStatus { Valid, Invalid, Circular, IllFormed };

const char* to_string(ValidityStatus s);

struct ValidityResult {
  ValidityStatus status = ValidityStatus::IllFormed;
  // Present iff Invalid: a satisfying assignment of the ground atoms under
  // which all premises hold and the conclusion fails.
  std::map<std::string, bool> countermodel;
  // Present iff Valid or Circular: indices of a deletion-minimal premise
  // subset that still entails the conclusion.
  std::vector<std::size_t> necessary_premises;
  std::string diagnostics;
};

struct SolveOptions {
  GroundOptions ground;
  SatOptions sat;
};

// Refutation check: premises entail the conclusion iff
// premises AND NOT conclusion is unsatisfiable under closed-domain grounding.
// Arity conflicts across the formula set yield status IllFormed with the
// offending formula index in diagnostics (index n = conclusion).
ValidityResult entails(const std::vector<FormulaPtr>& premises, const FormulaPtr& conclusion,
                       const SolveOptions& opts = {});

// Deletion-based minimal subset: the returned premises still entail the
// conclusion and removing any single one breaks entailment. Precondition:
// entails(premises, conclusion) is Valid; throws NotValid otherwise.
std::vector<std::size_t> minimize_premises(const std::vector<FormulaPtr>& premises, const FormulaPtr& conclusion,
                                           const SolveOptions& opts = {});

// Canonical form: bound variables renamed in a fixed traversal order,
// associative connectives (and/or) flattened with operands deduplicated and
// sorted by an alpha-invariant key. Idempotent; alpha-equivalent formulas map
// to identical ASTs.
FormulaPtr normalize(const FormulaPtr& f);

// The conclusion is syntactically (after normalization) one of the necessary
// premises of its own derivation.
bool is_circular(const std::vector<FormulaPtr>& necessary, const FormulaPtr& conclusion);

// entails + minimize + circularity in one pass, as the reconstruction loop
// consumes it: Valid arguments whose conclusion appears among the necessary
// premises are reported as Circular.
ValidityResult check_argument(const std::vector<FormulaPtr>& premises, const FormulaPtr& conclusion,
                              const SolveOptions& opts = {});

}  // namespace reviewscore::fol
