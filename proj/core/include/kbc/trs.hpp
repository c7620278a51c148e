#pragma once

// Indexed equations and rules, and leftmost-innermost rewriting.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "kbc/index.hpp"
#include "kbc/runtime.hpp"
#include "kbc/term.hpp"

namespace kbc {

/// Unique positive index of an equation or rule. Never reused within a run.
using Index = std::uint64_t;

class InvalidRule : public Error {
 public:
  using Error::Error;
};

class StepBoundExceeded : public Error {
 public:
  using Error::Error;
};

class IndexAllocator {
 public:
  Index next() { return next_++; }
  Index peek() const { return next_; }

 private:
  Index next_ = 1;
};

struct Equation {
  Index index = 0;
  Term lhs;
  Term rhs;
};

struct Rule {
  Index index = 0;
  Term lhs;
  Term rhs;
};

/// Throws InvalidRule unless lhs is not a variable and vars(rhs) ⊆ vars(lhs).
void validate_rule(const Term& lhs, const Term& rhs);

/// Rules keyed by index, with their left-hand sides in a discrimination tree.
class RuleSet {
 public:
  explicit RuleSet(std::shared_ptr<IndexAllocator> allocator = std::make_shared<IndexAllocator>());

  /// Validates, allocates a fresh index and indexes the lhs.
  Index add(Term lhs, Term rhs);
  /// Inserts a rule under an index the caller allocated.
  void insert(Rule rule);
  void erase(Index index);

  const Rule* find(Index index) const;
  const Rule& at(Index index) const;
  bool contains(Index index) const { return rules_.contains(index); }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }

  const std::map<Index, Rule>& rules() const { return rules_; }
  std::vector<Index> indices() const;
  const DiscriminationTree& tree() const { return tree_; }
  IndexAllocator& allocator() const { return *allocator_; }

 private:
  std::map<Index, Rule> rules_;
  DiscriminationTree tree_;
  std::shared_ptr<IndexAllocator> allocator_;
};

class EquationSet {
 public:
  explicit EquationSet(std::shared_ptr<IndexAllocator> allocator = std::make_shared<IndexAllocator>());

  Index add(Term lhs, Term rhs);
  void insert(Equation eq);
  void erase(Index index);

  const Equation* find(Index index) const;
  const Equation& at(Index index) const;
  bool contains(Index index) const { return equations_.contains(index); }
  std::size_t size() const { return equations_.size(); }
  bool empty() const { return equations_.empty(); }

  const std::map<Index, Equation>& equations() const { return equations_; }
  std::vector<Index> indices() const;
  IndexAllocator& allocator() const { return *allocator_; }

 private:
  std::map<Index, Equation> equations_;
  std::shared_ptr<IndexAllocator> allocator_;
};

/// One step input →_R result: result = replace_at(input, position, matcher(rule.rhs)).
struct RewriteStep {
  Index rule = 0;
  Position position;
  Substitution matcher;
  Term result;
};

using RuleFilter = std::function<bool(const Rule&)>;

/// Which rules a rewrite may use. `allowed` restricts every step; `untried`
/// additionally restricts the search for the first step only. The latter is
/// how the result caches plug in: rules already tried on an unchanged term
/// cannot apply to it, so skipping them never changes the chosen step.
struct RuleScope {
  RuleFilter allowed;
  RuleFilter untried;
};

/// First redex in leftmost-innermost order, ties broken by ascending rule
/// index. With `indexing`, candidates come from the discrimination tree; the
/// result is identical either way.
std::optional<RewriteStep> rewrite_once(const Term& t, const RuleSet& rules, bool indexing = true,
                                        const RuleScope& scope = {});

struct NormalizeOptions {
  bool indexing = true;
  std::size_t step_bound = 100'000;
  const Deadline* deadline = nullptr;
};

struct Normalized {
  Term term;
  std::vector<RewriteStep> steps;
};

/// Applies rewrite_once until none applies. Throws StepBoundExceeded past the
/// step bound and TimeoutError when the deadline passes.
Normalized normalize(const Term& t, const RuleSet& rules, const NormalizeOptions& options = {},
                     const RuleScope& scope = {});

/// Some subterm of s is an instance of l, and s, l are not variants.
bool encompassment_strict(const Term& s, const Term& l);

/// Checks a step against the rule set: the matcher maps the rule lhs onto
/// the subterm at the position and the result is the rewritten term.
bool validate_step(const Term& input, const RewriteStep& step, const RuleSet& rules);

}  // namespace kbc
