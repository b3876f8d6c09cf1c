#include "reviewscore/fol/parse.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace reviewscore::fol {

ParseError::ParseError(const std::string& msg, int line, int column, std::vector<std::string> expected_)
    : FolError(msg + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      line(line),
      column(column),
      expected(std::move(expected_)) {}

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Dot, Tilde, Amp, Pipe, Arrow, DArrow, Forall, Exists, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Tilde: return "'~'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::DArrow: return "'<->'";
    case Tok::Forall: return "'forall'";
    case Tok::Exists: return "'exists'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string s, int l, int c) { out.push_back({k, std::move(s), l, c}); };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    int tl = line, tc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      std::string word = text.substr(i, j - i);
      col += static_cast<int>(j - i);
      i = j;
      if (word == "forall")
        push(Tok::Forall, word, tl, tc);
      else if (word == "exists")
        push(Tok::Exists, word, tl, tc);
      else
        push(Tok::Ident, word, tl, tc);
      continue;
    }
    auto two = text.substr(i, 2);
    auto three = text.substr(i, 3);
    if (three == "<->") {
      push(Tok::DArrow, three, tl, tc);
      i += 3;
      col += 3;
      continue;
    }
    if (two == "->") {
      push(Tok::Arrow, two, tl, tc);
      i += 2;
      col += 2;
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, "(", tl, tc); break;
      case ')': push(Tok::RParen, ")", tl, tc); break;
      case ',': push(Tok::Comma, ",", tl, tc); break;
      case '.': push(Tok::Dot, ".", tl, tc); break;
      case '~': push(Tok::Tilde, "~", tl, tc); break;
      case '&': push(Tok::Amp, "&", tl, tc); break;
      case '|': push(Tok::Pipe, "|", tl, tc); break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", tl, tc, {});
    }
    ++i;
    ++col;
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  FormulaPtr run() {
    FormulaPtr f = parse_iff();
    expect(Tok::End);
    check_symbol_roles();
    return f;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_stack_;
  std::set<std::string> binder_names_;
  std::set<std::string> constant_names_;
  std::map<std::string, std::size_t> pred_arity_;

  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }

  Token eat() { return toks_[pos_++]; }

  Token expect(Tok k) {
    if (!at(k)) fail({tok_name(k)});
    return eat();
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    const Token& t = cur();
    std::ostringstream msg;
    msg << "unexpected " << tok_name(t.kind);
    if (t.kind == Tok::Ident) msg << " '" << t.text << "'";
    if (!expected.empty()) {
      msg << ", expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) msg << (i ? " or " : "") << expected[i];
    }
    throw ParseError(msg.str(), t.line, t.column, std::move(expected));
  }

  bool is_bound(const std::string& name) const {
    for (auto it = bound_stack_.rbegin(); it != bound_stack_.rend(); ++it)
      if (*it == name) return true;
    return false;
  }

  FormulaPtr parse_iff() {
    FormulaPtr lhs = parse_implies();
    while (at(Tok::DArrow)) {
      eat();
      lhs = iff(lhs, parse_implies());
    }
    return lhs;
  }

  FormulaPtr parse_implies() {
    FormulaPtr lhs = parse_or();
    if (at(Tok::Arrow)) {
      eat();
      return implies(lhs, parse_implies());
    }
    return lhs;
  }

  FormulaPtr parse_or() {
    FormulaPtr lhs = parse_and();
    while (at(Tok::Pipe)) {
      eat();
      lhs = lor(lhs, parse_and());
    }
    return lhs;
  }

  FormulaPtr parse_and() {
    FormulaPtr lhs = parse_unary();
    while (at(Tok::Amp)) {
      eat();
      lhs = land(lhs, parse_unary());
    }
    return lhs;
  }

  FormulaPtr parse_unary() {
    if (at(Tok::Tilde)) {
      eat();
      return lnot(parse_unary());
    }
    if (at(Tok::Forall) || at(Tok::Exists)) {
      bool is_forall = at(Tok::Forall);
      eat();
      Token v = expect(Tok::Ident);
      binder_names_.insert(v.text);
      expect(Tok::Dot);
      bound_stack_.push_back(v.text);
      FormulaPtr body = parse_iff();  // maximal scope
      bound_stack_.pop_back();
      return is_forall ? forall(v.text, body) : exists(v.text, body);
    }
    return parse_primary();
  }

  FormulaPtr parse_primary() {
    if (at(Tok::LParen)) {
      eat();
      FormulaPtr inner = parse_iff();
      expect(Tok::RParen);
      return inner;
    }
    if (!at(Tok::Ident)) fail({"identifier", "'('", "'~'", "'forall'", "'exists'"});
    Token name = eat();
    std::vector<Term> args;
    if (at(Tok::LParen)) {
      eat();
      args.push_back(parse_term());
      while (at(Tok::Comma)) {
        eat();
        args.push_back(parse_term());
      }
      if (!at(Tok::RParen)) fail({"','", "')'"});
      eat();
    }
    record_pred(name, args.size());
    Formula f;
    f.kind = Conn::Atom;
    f.pred = name.text;
    f.args = std::move(args);
    return std::make_shared<const Formula>(std::move(f));
  }

  Term parse_term() {
    if (!at(Tok::Ident)) fail({"identifier"});
    Token t = eat();
    if (is_bound(t.text)) return Term::variable(t.text);
    constant_names_.insert(t.text);
    return Term::constant(t.text);
  }

  void record_pred(const Token& name, std::size_t arity) {
    auto [it, inserted] = pred_arity_.emplace(name.text, arity);
    if (!inserted && it->second != arity) {
      throw ArityError("predicate '" + name.text + "' used with arity " + std::to_string(it->second) + " and " +
                           std::to_string(arity),
                       name.text);
    }
  }

  // A name may play only one role in a formula: predicate, constant, or bound
  // variable. An identifier that is bound somewhere but occurs as a constant
  // elsewhere is almost certainly a scoping mistake, so it is rejected rather
  // than silently read as a constant.
  void check_symbol_roles() {
    for (const auto& name : binder_names_) {
      if (constant_names_.count(name))
        throw UnboundVariable("'" + name + "' occurs outside the scope of its quantifier", name);
      if (pred_arity_.count(name))
        throw ArityError("symbol '" + name + "' used as both a bound variable and a predicate", name);
    }
    for (const auto& [p, arity] : pred_arity_) {
      (void)arity;
      if (constant_names_.count(p)) throw ArityError("symbol '" + p + "' used as both a predicate and a constant", p);
    }
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) { return Parser(text).run(); }

}  // namespace reviewscore::fol
