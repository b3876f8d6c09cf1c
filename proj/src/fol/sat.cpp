#include "reviewscore/fol/sat.hpp"

namespace reviewscore::fol {

namespace {

enum : signed char { kUnassigned = 0, kTrue = 1, kFalse = -1 };

struct Search {
  const std::vector<std::vector<int>>& clauses;
  int num_vars;
  std::uint64_t max_decisions;
  std::uint64_t decisions = 0;
  std::vector<signed char> value;  // 1-based

  explicit Search(const CnfFormula& cnf, const SatOptions& opts)
      : clauses(cnf.clauses), num_vars(cnf.num_vars), max_decisions(opts.max_decisions),
        value(static_cast<std::size_t>(cnf.num_vars) + 1, kUnassigned) {}

  signed char lit_value(int lit) const {
    signed char v = value[static_cast<std::size_t>(std::abs(lit))];
    if (v == kUnassigned) return kUnassigned;
    return (lit > 0) == (v == kTrue) ? kTrue : kFalse;
  }

  // Returns false on conflict. Fills trail with the variables it assigned.
  bool propagate(std::vector<int>& trail) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& clause : clauses) {
        int unassigned_lit = 0;
        int unassigned_count = 0;
        bool satisfied = false;
        for (int lit : clause) {
          signed char v = lit_value(lit);
          if (v == kTrue) {
            satisfied = true;
            break;
          }
          if (v == kUnassigned) {
            ++unassigned_count;
            unassigned_lit = lit;
            if (unassigned_count > 1) break;
          }
        }
        if (satisfied) continue;
        if (unassigned_count == 0) return false;  // falsified clause
        if (unassigned_count == 1) {
          const int var = std::abs(unassigned_lit);
          value[static_cast<std::size_t>(var)] = unassigned_lit > 0 ? kTrue : kFalse;
          trail.push_back(var);
          changed = true;
        }
      }
    }
    return true;
  }

  void undo(const std::vector<int>& trail) {
    for (int var : trail) value[static_cast<std::size_t>(var)] = kUnassigned;
  }

  bool solve() {
    std::vector<int> trail;
    if (!propagate(trail)) {
      undo(trail);
      return false;
    }
    int branch_var = 0;
    for (int v = 1; v <= num_vars; ++v) {
      if (value[static_cast<std::size_t>(v)] == kUnassigned) {
        branch_var = v;
        break;
      }
    }
    if (branch_var == 0) return true;  // total assignment, all clauses satisfied
    if (++decisions > max_decisions)
      throw ResourceLimit("sat: decision count exceeded " + std::to_string(max_decisions));
    for (signed char candidate : {kFalse, kTrue}) {
      value[static_cast<std::size_t>(branch_var)] = candidate;
      if (solve()) return true;
      value[static_cast<std::size_t>(branch_var)] = kUnassigned;
    }
    undo(trail);
    return false;
  }
};

}  // namespace

SatResult sat(const CnfFormula& cnf, const SatOptions& opts) {
  for (const auto& clause : cnf.clauses)
    if (clause.empty()) return {false, {}};
  Search search(cnf, opts);
  SatResult result;
  result.satisfiable = search.solve();
  if (result.satisfiable) {
    result.model.assign(static_cast<std::size_t>(cnf.num_vars) + 1, false);
    for (int v = 1; v <= cnf.num_vars; ++v) result.model[static_cast<std::size_t>(v)] = search.value[static_cast<std::size_t>(v)] == kTrue;
  }
  return result;
}

}  // namespace reviewscore::fol
