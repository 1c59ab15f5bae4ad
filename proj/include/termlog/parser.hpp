#pragma once

// Reader for the program file format:
//
//   clause     ::= term '.' | term ':-' term (',' term)* '.'
//   term       ::= sum
//   sum        ::= product ('+' product)*
//   product    ::= primary ('*' primary)*
//   primary    ::= VAR | NAME [ '(' term (',' term)* ')' ] | list | '(' term ')'
//   list       ::= '[' ']' | '[' term (',' term)* ['|' term] ']'
//
// `%` starts a line comment. Lines of the form `%% query: p(m1,...).` and
// `%% mode: p(in|out,...).` are directives.

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "termlog/error.hpp"
#include "termlog/term.hpp"

namespace termlog {

namespace detail {

class Reader {
 public:
  Reader(std::string_view text, std::size_t line = 1, std::size_t col = 1)
      : text_(text), line_(line), col_(col) {}

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  /// Parses one clause; variables are numbered from zero.
  Clause clause() {
    vars_.clear();
    next_var_ = 0;
    Clause c;
    c.head = atom();
    skip_ws();
    if (peek_str(":-")) {
      advance(2);
      c.body = conjunction();
    }
    expect_end();
    return c;
  }

  std::vector<Atom> conjunction() {
    std::vector<Atom> out{atom()};
    while (true) {
      skip_ws();
      if (peek() != ',') break;
      advance(1);
      out.push_back(atom());
    }
    return out;
  }

  Atom atom() {
    skip_ws();
    auto [l, c] = where();
    Term t = term();
    if (t.is_var()) throw SyntaxError("expected an atom, found a variable", l, c);
    return Atom(t);
  }

  Term term() { return sum(); }

  void expect_end() {
    skip_ws();
    if (peek() != '.') error("expected '.'");
    advance(1);
  }

  void expect_eof() {
    if (!at_end()) error("unexpected trailing input");
  }

  const std::map<std::string, Term>& named_vars() const { return vars_; }
  VarId next_var() const { return next_var_; }
  void set_next_var(VarId v) { next_var_ = v; }

  [[noreturn]] void error(const std::string& what) { throw SyntaxError(what, line_, col_); }

  std::pair<std::size_t, std::size_t> where() const { return {line_, col_}; }

 private:
  char peek(std::size_t k = 0) const { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; }
  bool peek_str(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
      } else {
        break;
      }
    }
  }

  Term sum() {
    Term left = product();
    while (true) {
      skip_ws();
      if (peek() != '+') break;
      advance(1);
      left = Term::app(kPlus, {left, product()});
    }
    return left;
  }

  Term product() {
    Term left = primary();
    while (true) {
      skip_ws();
      if (peek() != '*') break;
      advance(1);
      left = Term::app(kTimes, {left, primary()});
    }
    return left;
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  Term primary() {
    skip_ws();
    char c = peek();
    if (c == '\0') error("unexpected end of input");
    if (c == '(') {
      advance(1);
      Term t = term();
      skip_ws();
      if (peek() != ')') error("expected ')'");
      advance(1);
      return t;
    }
    if (c == '[') return list();
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (ident_char(peek())) {
        name += peek();
        advance(1);
      }
      if (name == "_") return Term::var(next_var_++, "_");
      auto it = vars_.find(name);
      if (it != vars_.end()) return it->second;
      Term v = Term::var(next_var_++, name);
      vars_.emplace(name, v);
      return v;
    }
    std::string name;
    if (std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c))) {
      while (ident_char(peek())) {
        name += peek();
        advance(1);
      }
    } else if (c == '\'') {
      advance(1);
      while (peek() != '\'' && peek() != '\0') {
        name += peek();
        advance(1);
      }
      if (peek() != '\'') error("unterminated quoted atom");
      advance(1);
    } else {
      error(std::string("unexpected character '") + c + "'");
    }
    if (peek() != '(') return Term::constant(name);
    advance(1);
    std::vector<Term> args{term()};
    while (true) {
      skip_ws();
      if (peek() == ',') {
        advance(1);
        args.push_back(term());
      } else if (peek() == ')') {
        advance(1);
        break;
      } else {
        error("expected ',' or ')'");
      }
    }
    return Term::app(Symbol{name, args.size()}, std::move(args));
  }

  Term list() {
    advance(1);  // '['
    skip_ws();
    if (peek() == ']') {
      advance(1);
      return Term::constant("[]");
    }
    std::vector<Term> elems{term()};
    std::optional<Term> tail;
    while (true) {
      skip_ws();
      if (peek() == ',') {
        advance(1);
        elems.push_back(term());
      } else if (peek() == '|') {
        advance(1);
        tail = term();
        skip_ws();
        if (peek() != ']') error("expected ']'");
        advance(1);
        break;
      } else if (peek() == ']') {
        advance(1);
        break;
      } else {
        error("expected ',', '|' or ']'");
      }
    }
    return Term::list(elems, tail);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t col_;
  std::map<std::string, Term> vars_;
  VarId next_var_ = 0;
};

inline std::string_view trim_left(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  return s;
}

inline Directive parse_directive(std::string_view body, Directive::Kind kind, std::size_t line, std::size_t col) {
  Reader r(body, line, col);
  Atom a = r.atom();
  r.expect_end();
  r.expect_eof();
  Directive d{kind, a.pred(), {}, line};
  for (const auto& arg : a.args()) {
    if (!arg.is_constant()) throw SyntaxError("directive arguments must be plain names", line, col);
    d.values.push_back(arg.symbol().name);
  }
  return d;
}

}  // namespace detail

/// Parses a whole program. Clause order and directive order are preserved.
inline Program parse_program(std::string_view text) {
  Program prog;
  // Directives live in comments, so pick them out line by line first.
  std::size_t line_no = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    std::string_view t = detail::trim_left(line);
    if (t.substr(0, 2) == "%%") {
      std::string_view rest = detail::trim_left(t.substr(2));
      std::size_t col = line.size() - rest.size() + 1;
      for (auto [kw, kind] : {std::pair{std::string_view("query:"), Directive::Kind::Query},
                              std::pair{std::string_view("mode:"), Directive::Kind::Mode}}) {
        if (rest.substr(0, kw.size()) == kw)
          prog.directives.push_back(detail::parse_directive(rest.substr(kw.size()), kind, line_no, col + kw.size()));
      }
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
    ++line_no;
  }

  detail::Reader r(text);
  while (!r.at_end()) prog.clauses.push_back(r.clause());

  // A directive must name a predicate with the arity it is used at.
  auto preds = prog.predicates();
  for (const auto& d : prog.directives) {
    bool exact = std::find(preds.begin(), preds.end(), d.pred) != preds.end();
    bool same_name = std::any_of(preds.begin(), preds.end(), [&](const Symbol& s) { return s.name == d.pred.name; });
    if (!exact && same_name)
      throw ArityClashError("directive at line " + std::to_string(d.line) + " uses " + d.pred.str() +
                            " but the program defines a different arity");
  }
  return prog;
}

/// Parses a single term; variables are numbered from `first_var`.
inline Term parse_term(std::string_view text, VarId first_var = 0) {
  detail::Reader r(text);
  r.set_next_var(first_var);
  Term t = r.term();
  r.expect_eof();
  return t;
}

/// Parses a goal `a1, ..., an` with an optional trailing '.'.
inline std::vector<Atom> parse_goal(std::string_view text, VarId first_var = 0) {
  detail::Reader r(text);
  r.set_next_var(first_var);
  auto atoms = r.conjunction();
  if (!r.at_end()) r.expect_end();
  r.expect_eof();
  return atoms;
}

inline Atom parse_atom(std::string_view text, VarId first_var = 0) {
  auto g = parse_goal(text, first_var);
  if (g.size() != 1) throw SyntaxError("expected a single atom", 1, 1);
  return g.front();
}

inline Clause parse_clause(std::string_view text) {
  detail::Reader r(text);
  Clause c = r.clause();
  r.expect_eof();
  return c;
}

}  // namespace termlog
