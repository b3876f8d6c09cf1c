#include "reviewscore/fol/smtlib.hpp"

#include <sstream>

#include "reviewscore/fol/parse.hpp"

namespace reviewscore::fol {

namespace {

void emit(const Formula& f, std::ostream& os) {
  switch (f.kind) {
    case Conn::Atom:
      if (f.args.empty()) {
        os << f.pred;
      } else {
        os << "(" << f.pred;
        for (const Term& t : f.args) os << " " << t.name;
        os << ")";
      }
      return;
    case Conn::Not:
      os << "(not ";
      emit(*f.kids[0], os);
      os << ")";
      return;
    case Conn::And:
    case Conn::Or: {
      os << (f.kind == Conn::And ? "(and" : "(or");
      for (const auto& k : f.kids) {
        os << " ";
        emit(*k, os);
      }
      os << ")";
      return;
    }
    case Conn::Implies:
      os << "(=> ";
      emit(*f.kids[0], os);
      os << " ";
      emit(*f.kids[1], os);
      os << ")";
      return;
    case Conn::Iff:
      os << "(= ";
      emit(*f.kids[0], os);
      os << " ";
      emit(*f.kids[1], os);
      os << ")";
      return;
    case Conn::Forall:
    case Conn::Exists:
      os << (f.kind == Conn::Forall ? "(forall ((" : "(exists ((") << f.var << " U)) ";
      emit(*f.kids[0], os);
      os << ")";
      return;
  }
  throw FolError("unreachable formula kind");
}

}  // namespace

std::string export_smtlib(const std::vector<FormulaPtr>& premises, const FormulaPtr& conclusion,
                          const Signature& sig) {
  std::ostringstream os;
  os << "(set-logic UF)\n";
  os << "(declare-sort U 0)\n";
  for (const auto& c : sig.constants) os << "(declare-const " << c << " U)\n";
  for (const auto& [p, arity] : sig.predicates) {
    os << "(declare-fun " << p << " (";
    for (std::size_t i = 0; i < arity; ++i) os << (i ? " U" : "U");
    os << ") Bool)\n";
  }
  for (const auto& prem : premises) {
    os << "(assert ";
    emit(*prem, os);
    os << ")\n";
  }
  os << "(assert (not ";
  emit(*conclusion, os);
  os << "))\n";
  os << "(check-sat)\n";
  return os.str();
}

}  // namespace reviewscore::fol
