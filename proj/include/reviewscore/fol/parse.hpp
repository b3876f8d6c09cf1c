#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "reviewscore/fol/ast.hpp"

namespace reviewscore::fol {

struct FolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed concrete syntax. Carries the 1-based position and the token set
// that would have been accepted there.
struct ParseError : FolError {
  ParseError(const std::string& msg, int line, int column, std::vector<std::string> expected);
  int line;
  int column;
  std::vector<std::string> expected;
};

// A symbol used with two arities, or with conflicting roles
// (predicate vs constant vs bound variable).
struct ArityError : FolError {
  ArityError(const std::string& msg, std::string symbol) : FolError(msg), symbol(std::move(symbol)) {}
  std::string symbol;
};

// An identifier that is bound by a quantifier somewhere in the formula also
// occurs outside that quantifier's scope.
struct UnboundVariable : FolError {
  UnboundVariable(const std::string& msg, std::string symbol) : FolError(msg), symbol(std::move(symbol)) {}
  std::string symbol;
};

// Grammar (documented in docs/fol-grammar.md):
//   formula ::= iff
//   iff     ::= implies { "<->" implies }
//   implies ::= or [ "->" implies ]
//   or      ::= and { "|" and }
//   and     ::= unary { "&" unary }
//   unary   ::= "~" unary | ("forall"|"exists") IDENT "." formula | primary
//   primary ::= IDENT [ "(" IDENT { "," IDENT } ")" ] | "(" formula ")"
// A quantifier body extends as far right as possible. Any identifier bound by
// an enclosing quantifier is a variable; every other identifier in term
// position is a constant.
FormulaPtr parse_formula(const std::string& text);

}  // namespace reviewscore::fol
