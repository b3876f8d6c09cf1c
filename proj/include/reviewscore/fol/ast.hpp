#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

// Function-free first-order logic AST. Terms are constants or variables only;
// formulas are immutable and shared by pointer, so copies are cheap and safe
// to pass between threads.
namespace reviewscore::fol {

struct Term {
  enum class Kind { Constant, Variable };
  Kind kind;
  std::string name;

  static Term constant(std::string n) { return {Kind::Constant, std::move(n)}; }
  static Term variable(std::string n) { return {Kind::Variable, std::move(n)}; }

  friend bool operator==(const Term& a, const Term& b) { return a.kind == b.kind && a.name == b.name; }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
};

enum class Conn {
  Atom,     // pred(args...), arity 0 allowed (propositional atom)
  Not,      // kids[0]
  And,      // kids[0..n), n >= 2 after flattening, = 2 when built pairwise
  Or,
  Implies,  // kids[0] -> kids[1]
  Iff,      // kids[0] <-> kids[1]
  Forall,   // var, kids[0]
  Exists,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Conn kind = Conn::Atom;
  std::string pred;             // Atom only
  std::vector<Term> args;       // Atom only
  std::vector<FormulaPtr> kids;
  std::string var;              // Forall/Exists only
};

FormulaPtr atom(std::string pred, std::vector<Term> args = {});
FormulaPtr lnot(FormulaPtr f);
FormulaPtr land(std::vector<FormulaPtr> kids);
FormulaPtr lor(std::vector<FormulaPtr> kids);
FormulaPtr land(FormulaPtr a, FormulaPtr b);
FormulaPtr lor(FormulaPtr a, FormulaPtr b);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr iff(FormulaPtr a, FormulaPtr b);
FormulaPtr forall(std::string var, FormulaPtr body);
FormulaPtr exists(std::string var, FormulaPtr body);

// Structural equality (term kinds and names included).
bool equal(const Formula& a, const Formula& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

// Concrete-grammar rendering; parse(print(f)) reproduces f.
std::string print(const Formula& f);
std::string print(const FormulaPtr& f);

// Constant and predicate symbols of a formula set, with a fresh constant
// injected when no constant occurs anywhere (so grounding has a non-empty
// domain).
struct Signature {
  std::set<std::string> constants;
  std::map<std::string, std::size_t> predicates;  // symbol -> arity
};

// Natural-language meaning per predicate/constant symbol.
using KeyTable = std::map<std::string, std::string>;

}  // namespace reviewscore::fol
