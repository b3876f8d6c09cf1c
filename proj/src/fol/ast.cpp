#include "reviewscore/fol/ast.hpp"

#include <sstream>
#include <stdexcept>

namespace reviewscore::fol {

namespace {

FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

// Precedence for printing with minimal parentheses:
// atoms/negation/quantifiers bind tightest, then & then | then -> then <->.
int prec(Conn k) {
  switch (k) {
    case Conn::Atom: return 6;
    case Conn::Not: return 5;
    case Conn::Forall:
    case Conn::Exists: return 1;  // body extends maximally, always parenthesize when nested
    case Conn::And: return 4;
    case Conn::Or: return 3;
    case Conn::Implies: return 2;
    case Conn::Iff: return 1;
  }
  return 0;
}

void print_rec(const Formula& f, int parent_prec, std::ostream& os) {
  const int p = prec(f.kind);
  const bool need_paren = p < parent_prec || f.kind == Conn::Forall || f.kind == Conn::Exists;
  switch (f.kind) {
    case Conn::Atom: {
      os << f.pred;
      if (!f.args.empty()) {
        os << "(";
        for (std::size_t i = 0; i < f.args.size(); ++i) {
          if (i) os << ", ";
          os << f.args[i].name;
        }
        os << ")";
      }
      return;
    }
    case Conn::Not:
      os << "~";
      print_rec(*f.kids[0], p + 1, os);
      return;
    case Conn::Forall:
    case Conn::Exists: {
      if (need_paren && parent_prec > 0) os << "(";
      os << (f.kind == Conn::Forall ? "forall " : "exists ") << f.var << ". ";
      print_rec(*f.kids[0], 0, os);
      if (need_paren && parent_prec > 0) os << ")";
      return;
    }
    case Conn::And:
    case Conn::Or: {
      if (need_paren) os << "(";
      const char* sep = f.kind == Conn::And ? " & " : " | ";
      for (std::size_t i = 0; i < f.kids.size(); ++i) {
        if (i) os << sep;
        print_rec(*f.kids[i], p + 1, os);
      }
      if (need_paren) os << ")";
      return;
    }
    case Conn::Implies: {
      if (need_paren) os << "(";
      print_rec(*f.kids[0], p + 1, os);
      os << " -> ";
      print_rec(*f.kids[1], p, os);  // right-associative
      if (need_paren) os << ")";
      return;
    }
    case Conn::Iff: {
      if (need_paren) os << "(";
      print_rec(*f.kids[0], p + 1, os);
      os << " <-> ";
      print_rec(*f.kids[1], p + 1, os);
      if (need_paren) os << ")";
      return;
    }
  }
}

}  // namespace

FormulaPtr atom(std::string pred, std::vector<Term> args) {
  Formula f;
  f.kind = Conn::Atom;
  f.pred = std::move(pred);
  f.args = std::move(args);
  return make(std::move(f));
}

FormulaPtr lnot(FormulaPtr a) {
  Formula f;
  f.kind = Conn::Not;
  f.kids = {std::move(a)};
  return make(std::move(f));
}

FormulaPtr land(std::vector<FormulaPtr> kids) {
  if (kids.empty()) throw std::invalid_argument("land: empty operand list");
  if (kids.size() == 1) return kids[0];
  Formula f;
  f.kind = Conn::And;
  f.kids = std::move(kids);
  return make(std::move(f));
}

FormulaPtr lor(std::vector<FormulaPtr> kids) {
  if (kids.empty()) throw std::invalid_argument("lor: empty operand list");
  if (kids.size() == 1) return kids[0];
  Formula f;
  f.kind = Conn::Or;
  f.kids = std::move(kids);
  return make(std::move(f));
}

FormulaPtr land(FormulaPtr a, FormulaPtr b) { return land(std::vector<FormulaPtr>{std::move(a), std::move(b)}); }
FormulaPtr lor(FormulaPtr a, FormulaPtr b) { return lor(std::vector<FormulaPtr>{std::move(a), std::move(b)}); }

FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.kind = Conn::Implies;
  f.kids = {std::move(a), std::move(b)};
  return make(std::move(f));
}

FormulaPtr iff(FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.kind = Conn::Iff;
  f.kids = {std::move(a), std::move(b)};
  return make(std::move(f));
}

FormulaPtr forall(std::string var, FormulaPtr body) {
  Formula f;
  f.kind = Conn::Forall;
  f.var = std::move(var);
  f.kids = {std::move(body)};
  return make(std::move(f));
}

FormulaPtr exists(std::string var, FormulaPtr body) {
  Formula f;
  f.kind = Conn::Exists;
  f.var = std::move(var);
  f.kids = {std::move(body)};
  return make(std::move(f));
}

bool equal(const Formula& a, const Formula& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Conn::Atom:
      return a.pred == b.pred && a.args == b.args;
    case Conn::Forall:
    case Conn::Exists:
      if (a.var != b.var) return false;
      [[fallthrough]];
    default: {
      if (a.kids.size() != b.kids.size()) return false;
      for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!equal(*a.kids[i], *b.kids[i])) return false;
      return true;
    }
  }
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return equal(*a, *b);
}

std::string print(const Formula& f) {
  std::ostringstream os;
  print_rec(f, 0, os);
  return os.str();
}

std::string print(const FormulaPtr& f) { return print(*f); }

}  // namespace reviewscore::fol
