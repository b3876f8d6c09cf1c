#pragma once

#include <string>
#include <vector>

#include "reviewscore/fol/ast.hpp"

namespace reviewscore::fol {

// SMT-LIB v2 script over an uninterpreted sort U: sort + symbol declarations,
// one assert per premise, the negated conclusion, then (check-sat). An
// external solver answering "unsat" agrees with entails() = Valid. Output is
// bit-exact for identical input (symbols emitted in sorted order).
std::string export_smtlib(const std::vector<FormulaPtr>& premises, const FormulaPtr& conclusion,
                          const Signature& sig);

}  // namespace reviewscore::fol
