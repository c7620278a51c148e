#include "kbc/tpdb.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace kbc {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

std::vector<std::pair<Term, Term>> ProblemFile::equations() const {
  std::vector<std::pair<Term, Term>> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.emplace_back(e.lhs, e.rhs);
  return out;
}

bool operator==(const ProblemFile& a, const ProblemFile& b) {
  if (a.variables != b.variables || a.entries != b.entries) return false;
  const auto& sa = a.signature.symbols();
  const auto& sb = b.signature.symbols();
  return std::equal(sa.begin(), sa.end(), sb.begin(), sb.end(), [](const Symbol& x, const Symbol& y) {
    return x.name == y.name && x.arity == y.arity;
  });
}

namespace {

enum class Tok { Open, Close, Comma, Arrow, EqEq, Ident, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  const Token& peek() {
    if (!ahead_) ahead_ = lex();
    return *ahead_;
  }

  Token next() {
    Token t = peek();
    ahead_.reset();
    return t;
  }

  // Skips raw text up to the parenthesis closing an already-opened section.
  void skip_section() {
    ahead_.reset();
    int depth = 1;
    while (pos_ < text_.size()) {
      char c = advance();
      if (c == '(') ++depth;
      if (c == ')' && --depth == 0) return;
    }
    throw ParseError("unterminated section", line_, column_);
  }

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  bool at(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  Token lex() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ == text_.size()) return t;
    char c = text_[pos_];
    if (c == '(' || c == ')' || c == ',') {
      advance();
      t.kind = c == '(' ? Tok::Open : c == ')' ? Tok::Close : Tok::Comma;
      return t;
    }
    if (at("->") || at("==")) {
      t.kind = at("->") ? Tok::Arrow : Tok::EqEq;
      t.text = std::string(text_.substr(pos_, 2));
      advance();
      advance();
      return t;
    }
    t.kind = Tok::Ident;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ',' ||
          at("->") || at("==")) {
        break;
      }
      t.text += advance();
    }
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  std::optional<Token> ahead_;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  ProblemFile run() {
    bool seen_var = false;
    bool seen_rules = false;
    while (lex_.peek().kind != Tok::End) {
      expect(Tok::Open, "'('");
      Token head = lex_.next();
      if (head.kind != Tok::Ident) fail("expected section name", head);
      if (head.text == "VAR") {
        if (seen_var) fail("duplicate VAR section", head);
        if (seen_rules) fail("VAR section must precede RULES", head);
        seen_var = true;
        parse_vars();
      } else if (head.text == "RULES") {
        if (seen_rules) fail("duplicate RULES section", head);
        seen_rules = true;
        parse_rules();
      } else if (head.text == "COMMENT") {
        lex_.skip_section();
      } else {
        fail("unsupported section '" + head.text + "'", head);
      }
    }
    return std::move(out_);
  }

 private:
  [[noreturn]] static void fail(const std::string& what, const Token& at) {
    throw ParseError(what, at.line, at.column);
  }

  Token expect(Tok kind, const char* what) {
    Token t = lex_.next();
    if (t.kind != kind) {
      fail(std::string("expected ") + what + (t.kind == Tok::End ? ", found end of input" : ""), t);
    }
    return t;
  }

  void parse_vars() {
    for (;;) {
      Token t = lex_.next();
      if (t.kind == Tok::Close) return;
      if (t.kind != Tok::Ident) fail("expected variable name or ')'", t);
      if (out_.signature.find_variable(t.text)) continue;
      out_.signature.variable(t.text);
      out_.variables.push_back(t.text);
    }
  }

  void parse_rules() {
    while (lex_.peek().kind != Tok::Close) {
      if (lex_.peek().kind == Tok::End) fail("unterminated RULES section", lex_.peek());
      Term lhs = parse_term();
      Token sep = lex_.next();
      if (sep.kind != Tok::Arrow && sep.kind != Tok::EqEq) fail("expected '->' or '=='", sep);
      Term rhs = parse_term();
      if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "|") {
        fail("conditional rules are not supported", lex_.peek());
      }
      out_.entries.push_back(
          {std::move(lhs), std::move(rhs), sep.kind == Tok::Arrow ? EntryKind::Rule : EntryKind::Equation});
    }
    lex_.next();
  }

  Term parse_term() {
    Token name = lex_.next();
    if (name.kind != Tok::Ident) fail("expected term", name);
    std::vector<Term> args;
    bool applied = false;
    if (lex_.peek().kind == Tok::Open) {
      applied = true;
      lex_.next();
      if (lex_.peek().kind != Tok::Close) {
        for (;;) {
          args.push_back(parse_term());
          Token t = lex_.next();
          if (t.kind == Tok::Close) break;
          if (t.kind != Tok::Comma) fail("expected ',' or ')'", t);
        }
      } else {
        lex_.next();
      }
    }
    if (auto v = out_.signature.find_variable(name.text)) {
      if (applied) fail("variable '" + name.text + "' applied to arguments", name);
      return Term::variable(*v);
    }
    try {
      SymbolId f = out_.signature.intern(name.text, static_cast<std::uint32_t>(args.size()));
      return Term::apply(f, std::move(args));
    } catch (const SignatureError& e) {
      fail(e.what(), name);
    }
  }

  Lexer lex_;
  ProblemFile out_;
};

}  // namespace

ProblemFile parse_problem(std::string_view text) { return Parser(text).run(); }

std::string print_problem(const ProblemFile& problem) {
  std::string out;
  if (!problem.variables.empty()) {
    out += "(VAR";
    for (const auto& v : problem.variables) out += " " + v;
    out += ")\n";
  }
  out += "(RULES\n";
  for (const auto& e : problem.entries) {
    out += "  " + to_string(e.lhs, problem.signature) +
           (e.kind == EntryKind::Rule ? " -> " : " == ") + to_string(e.rhs, problem.signature) + "\n";
  }
  out += ")\n";
  return out;
}

std::string print_trs(const Signature& sig, std::span<const std::pair<Term, Term>> rules,
                      std::string_view arrow) {
  std::vector<VarId> vars;
  for (const auto& [l, r] : rules) {
    for (const Term* t : {&l, &r}) {
      for (VarId v : variables(*t)) {
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
      }
    }
  }
  std::sort(vars.begin(), vars.end());
  std::string out;
  if (!vars.empty()) {
    out += "(VAR";
    for (VarId v : vars) out += " " + sig.variable_name(v);
    out += ")\n";
  }
  out += "(RULES\n";
  for (const auto& [l, r] : rules) {
    out += "  " + to_string(l, sig) + " " + std::string(arrow) + " " + to_string(r, sig) + "\n";
  }
  out += ")\n";
  return out;
}

}  // namespace kbc
