#include "reviewscore/fol/cnf.hpp"

#include <algorithm>
#include <stdexcept>

#include "reviewscore/fol/parse.hpp"

namespace reviewscore::fol {

int CnfFormula::lookup_or_add_atom(const std::string& name) {
  auto it = atom_index.find(name);
  if (it != atom_index.end()) return it->second;
  const int v = ++num_vars;
  ++num_input_vars;
  atom_index.emplace(name, v);
  atom_names.push_back(name);
  return v;
}

namespace {

void add_clause(CnfFormula& cnf, std::vector<int> lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  cnf.clauses.push_back(std::move(lits));
}

// Returns a literal equisatisfiably equivalent to the subformula.
int encode(CnfFormula& cnf, const Formula& f) {
  switch (f.kind) {
    case Conn::Atom: {
      for (const Term& t : f.args)
        if (t.kind == Term::Kind::Variable)
          throw FolError("to_cnf requires a ground formula, found variable '" + t.name + "'");
      return cnf.lookup_or_add_atom(print(f));
    }
    case Conn::Not:
      return -encode(cnf, *f.kids[0]);
    case Conn::And: {
      std::vector<int> lits;
      lits.reserve(f.kids.size());
      for (const auto& k : f.kids) lits.push_back(encode(cnf, *k));
      const int g = ++cnf.num_vars;
      std::vector<int> big{g};
      for (int a : lits) {
        add_clause(cnf, {-g, a});
        big.push_back(-a);
      }
      add_clause(cnf, std::move(big));
      return g;
    }
    case Conn::Or: {
      std::vector<int> lits;
      lits.reserve(f.kids.size());
      for (const auto& k : f.kids) lits.push_back(encode(cnf, *k));
      const int g = ++cnf.num_vars;
      std::vector<int> big{-g};
      for (int a : lits) {
        add_clause(cnf, {g, -a});
        big.push_back(a);
      }
      add_clause(cnf, std::move(big));
      return g;
    }
    case Conn::Implies: {
      const int a = encode(cnf, *f.kids[0]);
      const int b = encode(cnf, *f.kids[1]);
      const int g = ++cnf.num_vars;
      add_clause(cnf, {-g, -a, b});
      add_clause(cnf, {g, a});
      add_clause(cnf, {g, -b});
      return g;
    }
    case Conn::Iff: {
      const int a = encode(cnf, *f.kids[0]);
      const int b = encode(cnf, *f.kids[1]);
      const int g = ++cnf.num_vars;
      add_clause(cnf, {-g, -a, b});
      add_clause(cnf, {-g, a, -b});
      add_clause(cnf, {g, a, b});
      add_clause(cnf, {g, -a, -b});
      return g;
    }
    case Conn::Forall:
    case Conn::Exists:
      throw FolError("to_cnf requires a quantifier-free formula");
  }
  throw FolError("unreachable formula kind");
}

}  // namespace

void tseitin_add(CnfFormula& cnf, const FormulaPtr& f) {
  const int root = encode(cnf, *f);
  add_clause(cnf, {root});
}

CnfFormula to_cnf(const FormulaPtr& f) {
  CnfFormula cnf;
  tseitin_add(cnf, f);
  return cnf;
}

}  // namespace reviewscore::fol
