#include "kbc/trs.hpp"

#include <algorithm>

namespace kbc {

void validate_rule(const Term& lhs, const Term& rhs) {
  if (lhs.is_var()) throw InvalidRule("rule left-hand side is a variable");
  std::vector<VarId> lv = variables(lhs);
  for (VarId v : variables(rhs)) {
    if (std::find(lv.begin(), lv.end(), v) == lv.end()) {
      throw InvalidRule("rule right-hand side has a variable not in the left-hand side");
    }
  }
}

// --- RuleSet ---------------------------------------------------------------

RuleSet::RuleSet(std::shared_ptr<IndexAllocator> allocator) : allocator_(std::move(allocator)) {}

Index RuleSet::add(Term lhs, Term rhs) {
  validate_rule(lhs, rhs);
  Index index = allocator_->next();
  insert(Rule{index, std::move(lhs), std::move(rhs)});
  return index;
}

void RuleSet::insert(Rule rule) {
  validate_rule(rule.lhs, rule.rhs);
  if (rules_.contains(rule.index)) throw InvalidRule("duplicate rule index " + std::to_string(rule.index));
  tree_.insert(rule.index, rule.lhs);
  Index index = rule.index;
  rules_.emplace(index, std::move(rule));
}

void RuleSet::erase(Index index) {
  auto it = rules_.find(index);
  if (it == rules_.end()) throw InvalidRule("unknown rule index " + std::to_string(index));
  tree_.remove(index, it->second.lhs);
  rules_.erase(it);
}

const Rule* RuleSet::find(Index index) const {
  auto it = rules_.find(index);
  return it == rules_.end() ? nullptr : &it->second;
}

const Rule& RuleSet::at(Index index) const {
  if (const Rule* r = find(index)) return *r;
  throw InvalidRule("unknown rule index " + std::to_string(index));
}

std::vector<Index> RuleSet::indices() const {
  std::vector<Index> out;
  out.reserve(rules_.size());
  for (const auto& [i, r] : rules_) out.push_back(i);
  return out;
}

// --- EquationSet -----------------------------------------------------------

EquationSet::EquationSet(std::shared_ptr<IndexAllocator> allocator) : allocator_(std::move(allocator)) {}

Index EquationSet::add(Term lhs, Term rhs) {
  Index index = allocator_->next();
  equations_.emplace(index, Equation{index, std::move(lhs), std::move(rhs)});
  return index;
}

void EquationSet::insert(Equation eq) {
  Index index = eq.index;
  if (!equations_.emplace(index, std::move(eq)).second) {
    throw Error("duplicate equation index " + std::to_string(index));
  }
}

void EquationSet::erase(Index index) {
  if (equations_.erase(index) == 0) throw Error("unknown equation index " + std::to_string(index));
}

const Equation* EquationSet::find(Index index) const {
  auto it = equations_.find(index);
  return it == equations_.end() ? nullptr : &it->second;
}

const Equation& EquationSet::at(Index index) const {
  if (const Equation* e = find(index)) return *e;
  throw Error("unknown equation index " + std::to_string(index));
}

std::vector<Index> EquationSet::indices() const {
  std::vector<Index> out;
  out.reserve(equations_.size());
  for (const auto& [i, e] : equations_) out.push_back(i);
  return out;
}

// --- Rewriting -------------------------------------------------------------

namespace {

struct Redex {
  const Rule* rule;
  Substitution matcher;
};

bool admits(const RuleScope& scope, const Rule& rule, bool first_step) {
  if (scope.allowed && !scope.allowed(rule)) return false;
  if (first_step && scope.untried && !scope.untried(rule)) return false;
  return true;
}

std::optional<Redex> root_redex(const Term& t, const RuleSet& rules, bool indexing,
                                const RuleScope& scope, bool first_step) {
  if (t.is_var()) return std::nullopt;
  const auto attempt = [&](const Rule& rule) -> std::optional<Redex> {
    if (!admits(scope, rule, first_step)) return std::nullopt;
    Substitution sigma;
    if (!match_into(rule.lhs, t, sigma)) return std::nullopt;
    return Redex{&rule, std::move(sigma)};
  };
  if (indexing) {
    for (EntryId id : rules.tree().candidates_matching(t)) {
      if (auto r = attempt(rules.at(id))) return r;
    }
  } else {
    for (const auto& [index, rule] : rules.rules()) {
      if (rule.lhs.symbol() != t.symbol()) continue;
      if (auto r = attempt(rule)) return r;
    }
  }
  return std::nullopt;
}

// Post-order search: the first redex found is leftmost-innermost.
std::optional<RewriteStep> find_step(const Term& t, std::vector<std::uint32_t>& path,
                                     const RuleSet& rules, bool indexing, const RuleScope& scope) {
  if (t.is_var()) return std::nullopt;
  for (std::uint32_t i = 0; i < t.arity(); ++i) {
    path.push_back(i + 1);
    auto step = find_step(t.arg(i), path, rules, indexing, scope);
    path.pop_back();
    if (step) return step;
  }
  if (auto r = root_redex(t, rules, indexing, scope, true)) {
    return RewriteStep{r->rule->index, Position(path), std::move(r->matcher), t};
  }
  return std::nullopt;
}

class Normalizer {
 public:
  Normalizer(const RuleSet& rules, const NormalizeOptions& options, const RuleScope& scope)
      : rules_(rules), options_(options), scope_(scope) {}

  Term run(Term t) { return visit(std::move(t)); }

  std::vector<RewriteStep> steps;

 private:
  // Normalizing arguments left to right and then retrying the root yields
  // exactly the step sequence of repeated leftmost-innermost rewrite_once.
  Term visit(Term t) {
    for (;;) {
      if (t.is_var()) return t;
      std::vector<Term> args;
      bool changed = false;
      for (std::uint32_t i = 0; i < t.arity(); ++i) {
        path_.push_back(i + 1);
        Term a = visit(t.arg(i));
        path_.pop_back();
        if (!changed && !a.same_node(t.arg(i))) {
          changed = true;
          args.assign(t.args().begin(), t.args().begin() + i);
        }
        if (changed) args.push_back(std::move(a));
      }
      if (changed) t = Term::apply(t.symbol(), std::move(args));
      auto redex = root_redex(t, rules_, options_.indexing, scope_, steps.empty());
      if (!redex) return t;
      if (steps.size() >= options_.step_bound) {
        throw StepBoundExceeded("normalization exceeded " + std::to_string(options_.step_bound) +
                                " rewrite steps");
      }
      if (options_.deadline && (steps.size() & 63) == 63) options_.deadline->check();
      Term next = apply(redex->matcher, redex->rule->rhs);
      steps.push_back(RewriteStep{redex->rule->index, Position(path_), std::move(redex->matcher), next});
      t = std::move(next);
    }
  }

  const RuleSet& rules_;
  const NormalizeOptions& options_;
  const RuleScope& scope_;
  std::vector<std::uint32_t> path_;
};

}  // namespace

std::optional<RewriteStep> rewrite_once(const Term& t, const RuleSet& rules, bool indexing,
                                        const RuleScope& scope) {
  std::vector<std::uint32_t> path;
  auto step = find_step(t, path, rules, indexing, scope);
  if (step) {
    const Rule& rule = rules.at(step->rule);
    step->result = replace_at(t, step->position, apply(step->matcher, rule.rhs));
  }
  return step;
}

Normalized normalize(const Term& t, const RuleSet& rules, const NormalizeOptions& options,
                     const RuleScope& scope) {
  Normalizer n(rules, options, scope);
  Term nf = n.run(t);
  // Steps carry the local contractum so far; rebuild whole-term results.
  Term cur = t;
  for (auto& step : n.steps) {
    cur = replace_at(cur, step.position, std::move(step.result));
    step.result = cur;
  }
  return Normalized{std::move(nf), std::move(n.steps)};
}

bool encompassment_strict(const Term& s, const Term& l) {
  if (is_variant(s, l)) return false;
  std::vector<const Term*> stack{&s};
  while (!stack.empty()) {
    const Term* cur = stack.back();
    stack.pop_back();
    if (cur->size() < l.size()) continue;
    if (match(l, *cur)) return true;
    if (!cur->is_var()) {
      for (const Term& a : cur->args()) stack.push_back(&a);
    }
  }
  return false;
}

bool validate_step(const Term& input, const RewriteStep& step, const RuleSet& rules) {
  const Rule* rule = rules.find(step.rule);
  if (!rule || !valid_position(input, step.position)) return false;
  Term redex = subterm_at(input, step.position);
  if (!(apply(step.matcher, rule->lhs) == redex)) return false;
  return replace_at(input, step.position, apply(step.matcher, rule->rhs)) == step.result;
}

}  // namespace kbc
