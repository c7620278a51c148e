#pragma once

// The old TPDB text format: (VAR x y ...) (RULES l -> r  l == r ...).

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kbc/term.hpp"

namespace kbc {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

enum class EntryKind { Rule, Equation };

struct ProblemEntry {
  Term lhs;
  Term rhs;
  EntryKind kind = EntryKind::Rule;

  friend bool operator==(const ProblemEntry&, const ProblemEntry&) = default;
};

struct ProblemFile {
  Signature signature;
  std::vector<std::string> variables;  // declaration order
  std::vector<ProblemEntry> entries;

  /// Both `->` and `==` entries, as completion input.
  std::vector<std::pair<Term, Term>> equations() const;
};

bool operator==(const ProblemFile& a, const ProblemFile& b);

ProblemFile parse_problem(std::string_view text);
std::string print_problem(const ProblemFile& problem);

/// Renders a rule list as a TPDB problem, declaring every variable that occurs.
std::string print_trs(const Signature& sig, std::span<const std::pair<Term, Term>> rules,
                      std::string_view arrow = "->");

}  // namespace kbc
