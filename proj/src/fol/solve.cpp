#include "reviewscore/fol/solve.hpp"

#include <algorithm>
#include <sstream>

namespace reviewscore::fol {

const char* to_string(ValidityStatus s) {
  switch (s) {
    case ValidityStatus::Valid: return "valid";
    case ValidityStatus::Invalid: return "invalid";
    case ValidityStatus::Circular: return "circular";
    case ValidityStatus::IllFormed: return "ill_formed";
  }
  return "ill_formed";
}

namespace {

// Signature over premises + conclusion, reporting the index of the formula
// that first conflicts (conclusion counts as index |premises|).
Signature argument_signature(const std::vector<FormulaPtr>& premises, const FormulaPtr& conclusion,
                             std::size_t* offending_index) {
  Signature sig;
  std::vector<FormulaPtr> all = premises;
  all.push_back(conclusion);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (offending_index) *offending_index = i;
    Signature one = infer_signature({all[i]});
    for (const auto& c : one.constants) sig.constants.insert(c);
    for (const auto& [p, arity] : one.predicates) {
      auto [it, inserted] = sig.predicates.emplace(p, arity);
      if (!inserted && it->second != arity) {
        throw ArityError("predicate '" + p + "' used with arity " + std::to_string(it->second) + " and " +
                             std::to_string(arity),
                         p);
      }
    }
  }
  ensure_domain(sig);
  return sig;
}

bool entails_core(const std::vector<FormulaPtr>& premises, const FormulaPtr& conclusion, const Signature& sig,
                  const SolveOptions& opts, SatResult* counterexample = nullptr, CnfFormula* cnf_out = nullptr) {
  auto [gp, gc] = ground(premises, conclusion, sig, opts.ground);
  CnfFormula cnf;
  for (const auto& p : gp) tseitin_add(cnf, p);
  tseitin_add(cnf, lnot(gc));
  SatResult res = sat(cnf, opts.sat);
  if (counterexample) *counterexample = res;
  if (cnf_out) *cnf_out = std::move(cnf);
  return !res.satisfiable;
}

std::vector<std::size_t> minimize_with_sig(const std::vector<FormulaPtr>& premises, const FormulaPtr& conclusion,
                                           const Signature& sig, const SolveOptions& opts) {
  std::vector<std::size_t> active(premises.size());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;
  for (std::size_t i = 0; i < premises.size(); ++i) {
    std::vector<std::size_t> candidate;
    candidate.reserve(active.size());
    std::vector<FormulaPtr> subset;
    for (std::size_t idx : active) {
      if (idx == i) continue;
      candidate.push_back(idx);
      subset.push_back(premises[idx]);
    }
    if (candidate.size() == active.size()) continue;  // i already removed
    if (entails_core(subset, conclusion, sig, opts)) active = std::move(candidate);
  }
  return active;
}

}  // namespace

ValidityResult entails(const std::vector<FormulaPtr>& premises, const FormulaPtr& conclusion,
                       const SolveOptions& opts) {
  ValidityResult result;
  Signature sig;
  std::size_t offending = 0;
  try {
    sig = argument_signature(premises, conclusion, &offending);
  } catch (const FolError& e) {
    result.status = ValidityStatus::IllFormed;
    std::ostringstream os;
    os << "formula #" << offending << ": " << e.what();
    result.diagnostics = os.str();
    return result;
  }
  SatResult counterexample;
  CnfFormula cnf;
  if (entails_core(premises, conclusion, sig, opts, &counterexample, &cnf)) {
    result.status = ValidityStatus::Valid;
    result.necessary_premises = minimize_with_sig(premises, conclusion, sig, opts);
    result.diagnostics = "premises AND NOT conclusion is unsatisfiable";
  } else {
    result.status = ValidityStatus::Invalid;
    for (int v = 1; v <= cnf.num_input_vars; ++v)
      result.countermodel[cnf.atom_names[static_cast<std::size_t>(v) - 1]] =
          counterexample.model[static_cast<std::size_t>(v)];
    result.diagnostics = "found an interpretation satisfying all premises but not the conclusion";
  }
  return result;
}

std::vector<std::size_t> minimize_premises(const std::vector<FormulaPtr>& premises, const FormulaPtr& conclusion,
                                           const SolveOptions& opts) {
  std::size_t offending = 0;
  Signature sig = argument_signature(premises, conclusion, &offending);
  if (!entails_core(premises, conclusion, sig, opts))
    throw NotValid("minimize_premises requires a valid argument");
  return minimize_with_sig(premises, conclusion, sig, opts);
}

// --- normalization ---------------------------------------------------------

namespace {

// Alpha-invariant key: bound variables print as #k where k is the distance to
// the binder (innermost = 0), so sorting and deduplication are stable under
// renaming.
void key_rec(const Formula& f, std::vector<const std::string*>& binders, std::ostream& os) {
  switch (f.kind) {
    case Conn::Atom: {
      os << "A:" << f.pred << "(";
      for (const Term& t : f.args) {
        if (t.kind == Term::Kind::Variable) {
          bool found = false;
          for (std::size_t k = 0; k < binders.size(); ++k) {
            if (*binders[binders.size() - 1 - k] == t.name) {
              os << "#" << k << ",";
              found = true;
              break;
            }
          }
          if (!found) os << "?" << t.name << ",";
        } else {
          os << "c:" << t.name << ",";
        }
      }
      os << ")";
      return;
    }
    case Conn::Not: os << "N("; break;
    case Conn::And: os << "&("; break;
    case Conn::Or: os << "|("; break;
    case Conn::Implies: os << ">("; break;
    case Conn::Iff: os << "=("; break;
    case Conn::Forall: os << "F("; break;
    case Conn::Exists: os << "E("; break;
  }
  if (f.kind == Conn::Forall || f.kind == Conn::Exists) binders.push_back(&f.var);
  for (const auto& k : f.kids) {
    key_rec(*k, binders, os);
    os << ";";
  }
  if (f.kind == Conn::Forall || f.kind == Conn::Exists) binders.pop_back();
  os << ")";
}

std::string canonical_key(const Formula& f, std::vector<const std::string*>& binders) {
  std::ostringstream os;
  key_rec(f, binders, os);
  return os.str();
}

FormulaPtr structure_normalize(const FormulaPtr& f, std::vector<const std::string*>& binders) {
  switch (f->kind) {
    case Conn::Atom:
      return f;
    case Conn::Not:
      return lnot(structure_normalize(f->kids[0], binders));
    case Conn::Implies:
      return implies(structure_normalize(f->kids[0], binders), structure_normalize(f->kids[1], binders));
    case Conn::Iff:
      return iff(structure_normalize(f->kids[0], binders), structure_normalize(f->kids[1], binders));
    case Conn::Forall:
    case Conn::Exists: {
      binders.push_back(&f->var);
      FormulaPtr body = structure_normalize(f->kids[0], binders);
      binders.pop_back();
      return f->kind == Conn::Forall ? forall(f->var, body) : exists(f->var, body);
    }
    case Conn::And:
    case Conn::Or: {
      // Flatten nested connectives of the same kind, then sort and dedupe.
      std::vector<FormulaPtr> flat;
      for (const auto& kid : f->kids) {
        FormulaPtr n = structure_normalize(kid, binders);
        if (n->kind == f->kind)
          flat.insert(flat.end(), n->kids.begin(), n->kids.end());
        else
          flat.push_back(n);
      }
      std::vector<std::pair<std::string, FormulaPtr>> keyed;
      keyed.reserve(flat.size());
      for (const auto& k : flat) keyed.emplace_back(canonical_key(*k, binders), k);
      std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      std::vector<FormulaPtr> out;
      for (std::size_t i = 0; i < keyed.size(); ++i) {
        if (i > 0 && keyed[i].first == keyed[i - 1].first) continue;
        out.push_back(keyed[i].second);
      }
      if (out.size() == 1) return out[0];
      return f->kind == Conn::And ? land(std::move(out)) : lor(std::move(out));
    }
  }
  throw FolError("unreachable formula kind");
}

// Pre-order canonical renaming of binders to v0, v1, ...
FormulaPtr rename_rec(const FormulaPtr& f, std::map<std::string, std::string>& env, int& counter) {
  switch (f->kind) {
    case Conn::Atom: {
      std::vector<Term> args;
      args.reserve(f->args.size());
      for (const Term& t : f->args) {
        if (t.kind == Term::Kind::Variable) {
          auto it = env.find(t.name);
          args.push_back(Term::variable(it == env.end() ? t.name : it->second));
        } else {
          args.push_back(t);
        }
      }
      return atom(f->pred, std::move(args));
    }
    case Conn::Not:
      return lnot(rename_rec(f->kids[0], env, counter));
    case Conn::Implies:
      return implies(rename_rec(f->kids[0], env, counter), rename_rec(f->kids[1], env, counter));
    case Conn::Iff:
      return iff(rename_rec(f->kids[0], env, counter), rename_rec(f->kids[1], env, counter));
    case Conn::And:
    case Conn::Or: {
      std::vector<FormulaPtr> kids;
      kids.reserve(f->kids.size());
      for (const auto& k : f->kids) kids.push_back(rename_rec(k, env, counter));
      return f->kind == Conn::And ? land(std::move(kids)) : lor(std::move(kids));
    }
    case Conn::Forall:
    case Conn::Exists: {
      std::string fresh = "v" + std::to_string(counter++);
      auto prev = env.find(f->var);
      std::string saved;
      bool had = prev != env.end();
      if (had) saved = prev->second;
      env[f->var] = fresh;
      FormulaPtr body = rename_rec(f->kids[0], env, counter);
      if (had)
        env[f->var] = saved;
      else
        env.erase(f->var);
      return f->kind == Conn::Forall ? forall(fresh, body) : exists(fresh, body);
    }
  }
  throw FolError("unreachable formula kind");
}

}  // namespace

FormulaPtr normalize(const FormulaPtr& f) {
  std::vector<const std::string*> binders;
  FormulaPtr structured = structure_normalize(f, binders);
  std::map<std::string, std::string> env;
  int counter = 0;
  return rename_rec(structured, env, counter);
}

bool is_circular(const std::vector<FormulaPtr>& necessary, const FormulaPtr& conclusion) {
  FormulaPtr goal = normalize(conclusion);
  for (const auto& p : necessary)
    if (equal(normalize(p), goal)) return true;
  return false;
}

ValidityResult check_argument(const std::vector<FormulaPtr>& premises, const FormulaPtr& conclusion,
                              const SolveOptions& opts) {
  ValidityResult result = entails(premises, conclusion, opts);
  if (result.status != ValidityStatus::Valid) return result;
  std::vector<FormulaPtr> necessary;
  necessary.reserve(result.necessary_premises.size());
  for (std::size_t idx : result.necessary_premises) necessary.push_back(premises[idx]);
  if (is_circular(necessary, conclusion)) {
    result.status = ValidityStatus::Circular;
    result.diagnostics = "the conclusion is among the necessary premises of its own derivation";
  }
  return result;
}

}  // namespace reviewscore::fol
