#include "reviewscore/fol/ground.hpp"

#include <map>

namespace reviewscore::fol {

namespace {

void scan(const Formula& f, Signature& sig) {
  switch (f.kind) {
    case Conn::Atom: {
      auto [it, inserted] = sig.predicates.emplace(f.pred, f.args.size());
      if (!inserted && it->second != f.args.size()) {
        throw ArityError("predicate '" + f.pred + "' used with arity " + std::to_string(it->second) + " and " +
                             std::to_string(f.args.size()),
                         f.pred);
      }
      for (const Term& t : f.args)
        if (t.kind == Term::Kind::Constant) sig.constants.insert(t.name);
      return;
    }
    default:
      for (const auto& k : f.kids) scan(*k, sig);
  }
}

std::size_t quantifier_depth(const Formula& f) {
  std::size_t best = 0;
  for (const auto& k : f.kids) best = std::max(best, quantifier_depth(*k));
  if (f.kind == Conn::Forall || f.kind == Conn::Exists) ++best;
  return best;
}

using Env = std::map<std::string, std::string>;  // variable -> constant

FormulaPtr expand(const Formula& f, const Signature& sig, Env& env) {
  switch (f.kind) {
    case Conn::Atom: {
      std::vector<Term> args;
      args.reserve(f.args.size());
      for (const Term& t : f.args) {
        if (t.kind == Term::Kind::Variable) {
          auto it = env.find(t.name);
          if (it == env.end()) throw UnboundVariable("variable '" + t.name + "' has no enclosing quantifier", t.name);
          args.push_back(Term::constant(it->second));
        } else {
          args.push_back(t);
        }
      }
      return atom(f.pred, std::move(args));
    }
    case Conn::Not:
      return lnot(expand(*f.kids[0], sig, env));
    case Conn::And:
    case Conn::Or: {
      std::vector<FormulaPtr> kids;
      kids.reserve(f.kids.size());
      for (const auto& k : f.kids) kids.push_back(expand(*k, sig, env));
      return f.kind == Conn::And ? land(std::move(kids)) : lor(std::move(kids));
    }
    case Conn::Implies:
      return implies(expand(*f.kids[0], sig, env), expand(*f.kids[1], sig, env));
    case Conn::Iff:
      return iff(expand(*f.kids[0], sig, env), expand(*f.kids[1], sig, env));
    case Conn::Forall:
    case Conn::Exists: {
      std::vector<FormulaPtr> instances;
      instances.reserve(sig.constants.size());
      // Shadowed outer binding, if any, is restored afterwards.
      auto prev = env.find(f.var);
      std::string saved;
      bool had = prev != env.end();
      if (had) saved = prev->second;
      for (const auto& c : sig.constants) {
        env[f.var] = c;
        instances.push_back(expand(*f.kids[0], sig, env));
      }
      if (had)
        env[f.var] = saved;
      else
        env.erase(f.var);
      return f.kind == Conn::Forall ? land(std::move(instances)) : lor(std::move(instances));
    }
  }
  throw FolError("unreachable formula kind");
}

}  // namespace

Signature infer_signature(const std::vector<FormulaPtr>& formulas) {
  Signature sig;
  for (const auto& f : formulas) scan(*f, sig);
  return sig;
}

void ensure_domain(Signature& sig) {
  if (!sig.constants.empty()) return;
  for (int i = 0;; ++i) {
    std::string name = "c" + std::to_string(i);
    if (!sig.predicates.count(name)) {
      sig.constants.insert(name);
      return;
    }
  }
}

FormulaPtr ground_formula(const FormulaPtr& f, const Signature& sig, const GroundOptions& opts) {
  if (sig.constants.empty()) throw FolError("grounding requires a non-empty domain (call ensure_domain)");
  const std::size_t depth = quantifier_depth(*f);
  std::uint64_t cost = 1;
  for (std::size_t i = 0; i < depth; ++i) {
    cost *= sig.constants.size();
    if (cost > opts.max_instances) {
      throw DomainTooLarge("grounding would produce more than " + std::to_string(opts.max_instances) +
                           " instances (|constants|=" + std::to_string(sig.constants.size()) +
                           ", quantifier nesting=" + std::to_string(depth) + ")");
    }
  }
  Env env;
  return expand(*f, sig, env);
}

std::pair<std::vector<FormulaPtr>, FormulaPtr> ground(const std::vector<FormulaPtr>& premises,
                                                      const FormulaPtr& conclusion, const Signature& sig,
                                                      const GroundOptions& opts) {
  std::vector<FormulaPtr> gp;
  gp.reserve(premises.size());
  for (const auto& p : premises) gp.push_back(ground_formula(p, sig, opts));
  return {std::move(gp), ground_formula(conclusion, sig, opts)};
}

}  // namespace reviewscore::fol
