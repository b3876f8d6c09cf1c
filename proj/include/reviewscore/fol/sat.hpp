#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "reviewscore/fol/cnf.hpp"
#include "reviewscore/fol/parse.hpp"

namespace reviewscore::fol {

struct ResourceLimit : FolError {
  using FolError::FolError;
};

struct SatOptions {
  std::uint64_t max_decisions = 10'000'000;
};

// SAT carries a total assignment: model[v] for v in 1..num_vars (index 0
// unused). Variables left unconstrained by the search are assigned false, so
// identical inputs always produce the identical model.
struct SatResult {
  bool satisfiable = false;
  std::vector<bool> model;
};

// DPLL with unit propagation and fixed lexicographic branching (lowest
// unassigned variable, false branch first). Deterministic given identical
// input. Throws ResourceLimit when the decision count exceeds the cap.
SatResult sat(const CnfFormula& cnf, const SatOptions& opts = {});

}  // namespace reviewscore::fol
