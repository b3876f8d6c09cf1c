#pragma once

#include <map>
#include <string>
#include <vector>

#include "reviewscore/fol/ast.hpp"

namespace reviewscore::fol {

// Clauses over signed propositional atoms in DIMACS convention: literal +v is
// variable v, -v its negation; variables are numbered from 1. Variables
// 1..num_input_vars are ground atoms; the rest are Tseitin definitions.
struct CnfFormula {
  std::vector<std::vector<int>> clauses;
  std::vector<std::string> atom_names;        // index v-1 -> printed ground atom, input vars only
  std::map<std::string, int> atom_index;      // printed ground atom -> variable
  int num_input_vars = 0;
  int num_vars = 0;

  int lookup_or_add_atom(const std::string& name);
};

// Tseitin transformation of a quantifier-free formula with constant-only
// atoms: equisatisfiable, clause count linear in formula size. Passing an
// existing CnfFormula accumulates further formulas into one clause set with a
// shared atom table (used to conjoin premises with a negated conclusion).
void tseitin_add(CnfFormula& cnf, const FormulaPtr& f);

CnfFormula to_cnf(const FormulaPtr& f);

}  // namespace reviewscore::fol
