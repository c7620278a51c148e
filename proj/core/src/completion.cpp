#include "kbc/completion.hpp"

#include <algorithm>
#include <map>

namespace kbc {

// --- IndexSet --------------------------------------------------------------

bool IndexSet::contains(Index i) const { return std::binary_search(items_.begin(), items_.end(), i); }

void IndexSet::insert(Index i) {
  auto it = std::lower_bound(items_.begin(), items_.end(), i);
  if (it == items_.end() || *it != i) items_.insert(it, i);
}

void IndexSet::insert_all(std::span<const Index> sorted) {
  if (sorted.empty()) return;
  if (items_.empty() || items_.back() < sorted.front()) {
    items_.insert(items_.end(), sorted.begin(), sorted.end());
    return;
  }
  std::vector<Index> merged;
  merged.reserve(items_.size() + sorted.size());
  std::set_union(items_.begin(), items_.end(), sorted.begin(), sorted.end(), std::back_inserter(merged));
  items_ = std::move(merged);
}

// --- Inference steps -------------------------------------------------------

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace

std::string_view inference_name(const InferenceStep& step) {
  return std::visit(Overloaded{
                        [](const DeduceStep&) { return std::string_view("deduce"); },
                        [](const OrientStep&) { return std::string_view("orient"); },
                        [](const DeleteStep&) { return std::string_view("delete"); },
                        [](const SimplifyStep&) { return std::string_view("simplify"); },
                        [](const ComposeStep&) { return std::string_view("compose"); },
                        [](const CollapseStep&) { return std::string_view("collapse"); },
                    },
                    step);
}

std::vector<Index> consumed(const InferenceStep& step) {
  return std::visit(Overloaded{
                        [](const DeduceStep&) { return std::vector<Index>{}; },
                        [](const OrientStep& s) { return std::vector<Index>{s.equation}; },
                        [](const DeleteStep& s) { return std::vector<Index>{s.equation}; },
                        [](const SimplifyStep& s) { return std::vector<Index>{s.from}; },
                        [](const ComposeStep& s) { return std::vector<Index>{s.from}; },
                        [](const CollapseStep& s) { return std::vector<Index>{s.rule}; },
                    },
                    step);
}

std::vector<Index> produced(const InferenceStep& step) {
  return std::visit(Overloaded{
                        [](const DeduceStep& s) { return std::vector<Index>{s.equation}; },
                        [](const OrientStep& s) { return std::vector<Index>{s.rule}; },
                        [](const DeleteStep&) { return std::vector<Index>{}; },
                        [](const SimplifyStep& s) { return std::vector<Index>{s.to}; },
                        [](const ComposeStep& s) { return std::vector<Index>{s.to}; },
                        [](const CollapseStep& s) { return std::vector<Index>{s.equation}; },
                    },
                    step);
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Success:
      return "SUCCESS";
    case Outcome::Fail:
      return "FAIL";
    case Outcome::Timeout:
      return "TIMEOUT";
  }
  return "FAIL";
}

// --- Critical pairs --------------------------------------------------------

namespace {

// Critical pairs of `inner` into `outer` at the given function positions.
void overlap_rules(const Rule& inner, const Rule& outer, std::span<const Position> at,
                   std::vector<CriticalPair>& out) {
  const VarId offset = outer.lhs.var_bound();
  const Term inner_lhs = shift_variables(inner.lhs, offset);
  const Term inner_rhs = shift_variables(inner.rhs, offset);
  for (const Position& p : at) {
    if (p.is_root() && inner.index == outer.index) continue;
    Term sub = subterm_at(outer.lhs, p);
    if (sub.is_var()) continue;
    UnifyResult u = unify(inner_lhs, sub);
    if (!u) continue;
    const Substitution& sigma = *u.mgu;
    out.push_back(CriticalPair{apply(sigma, outer.rhs),
                               apply(sigma, replace_at(outer.lhs, p, inner_rhs)),
                               apply(sigma, outer.lhs),
                               Overlap{inner.index, outer.index, p, sigma}});
  }
}

// Function positions of an outer lhs together with the inner rules the
// index admits there.
struct OuterCandidates {
  std::vector<Position> positions;
  std::vector<std::vector<EntryId>> inner;  // parallel to positions; empty when not indexing
};

OuterCandidates outer_candidates(const RuleSet& rules, const Rule& outer, bool indexing) {
  OuterCandidates c;
  c.positions = function_positions(outer.lhs);
  if (indexing) {
    c.inner.reserve(c.positions.size());
    for (const Position& p : c.positions) {
      c.inner.push_back(rules.tree().candidates_unifiable(subterm_at(outer.lhs, p)));
    }
  }
  return c;
}

std::vector<Position> positions_for(const OuterCandidates& c, Index inner, bool indexing) {
  if (!indexing) return c.positions;
  std::vector<Position> out;
  for (std::size_t k = 0; k < c.positions.size(); ++k) {
    if (std::binary_search(c.inner[k].begin(), c.inner[k].end(), inner)) out.push_back(c.positions[k]);
  }
  return out;
}

}  // namespace

std::vector<CriticalPair> critical_pairs_between(const RuleSet& rules, Index inner, Index outer,
                                                 bool indexing) {
  const Rule& ri = rules.at(inner);
  const Rule& rj = rules.at(outer);
  OuterCandidates c = outer_candidates(rules, rj, indexing);
  std::vector<CriticalPair> out;
  overlap_rules(ri, rj, positions_for(c, inner, indexing), out);
  return out;
}

// --- Completion ------------------------------------------------------------

Completion::Completion(const Signature& sig, std::span<const std::pair<Term, Term>> equations,
                       CompletionConfig config)
    : sig_(sig),
      config_(std::move(config)),
      deadline_(config_.timeout),
      allocator_(std::make_shared<IndexAllocator>()),
      equations_(allocator_),
      rules_(allocator_),
      pool_(config_.parallel ? (config_.workers ? config_.workers : default_worker_count()) : 1) {
  if (const auto* kind = std::get_if<OrderKind>(&config_.backend)) {
    KboWeights w = config_.kbo_weights ? *config_.kbo_weights : KboWeights::uniform(sig_);
    order_.emplace(*kind, std::move(w), config_.order_limits);
  }
  for (const auto& [l, r] : equations) {
    Index i = equations_.add(l, r);
    initial_.push_back(equations_.at(i));
  }
}

Index Completion::seed_rule(Term lhs, Term rhs) {
  Index i = rules_.add(std::move(lhs), std::move(rhs));
  rules_changed();
  return i;
}

NormalizeOptions Completion::normalize_options() const {
  return NormalizeOptions{config_.indexing, config_.step_bound, &deadline_};
}

void Completion::rules_changed() { skipped_.clear(); }

namespace {

std::vector<SideRewrite> side_rewrites(const std::vector<RewriteStep>& steps, bool rhs_side) {
  std::vector<SideRewrite> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(SideRewrite{rhs_side, s.rule, s.position});
  return out;
}

}  // namespace

void Completion::simplify_phase() {
  deadline_.check();
  const std::vector<Index> ids = equations_.indices();
  const std::vector<Index> rule_ids = rules_.indices();
  const NormalizeOptions options = normalize_options();

  struct Result {
    Normalized lhs;
    Normalized rhs;
  };
  auto results = pool_.map(ids.size(), [&](std::size_t k) {
    const Equation& eq = equations_.at(ids[k]);
    RuleScope scope;
    if (config_.caching) {
      if (auto it = caches_.simplify.find(eq.index); it != caches_.simplify.end()) {
        const IndexSet* tried = &it->second;
        scope.untried = [tried](const Rule& r) { return !tried->contains(r.index); };
      }
    }
    Normalized l = normalize(eq.lhs, rules_, options, scope);
    Normalized r = normalize(eq.rhs, rules_, options, scope);
    return Result{std::move(l), std::move(r)};
  });

  for (std::size_t k = 0; k < ids.size(); ++k) {
    auto& [l, r] = results[k];
    const Index from = ids[k];
    if (l.steps.empty() && r.steps.empty()) {
      if (config_.caching) caches_.simplify[from].insert_all(rule_ids);
      continue;
    }
    SimplifyStep step{from, 0, side_rewrites(l.steps, false), l.term, r.term};
    auto rhs_rewrites = side_rewrites(r.steps, true);
    step.rewrites.insert(step.rewrites.end(), rhs_rewrites.begin(), rhs_rewrites.end());
    equations_.erase(from);
    caches_.simplify.erase(from);
    skipped_.erase(from);
    step.to = equations_.add(l.term, r.term);
    log_.emplace_back(std::move(step));
  }
}

void Completion::delete_phase() {
  // Canonical (lhs, rhs) of every kept equation, to spot copies.
  struct KeyHash {
    std::size_t operator()(const std::pair<Term, Term>& p) const noexcept {
      return p.first.hash() * 31 + p.second.hash();
    }
  };
  std::unordered_map<std::pair<Term, Term>, Index, KeyHash> seen;
  const auto canonical = [](const Term& a, const Term& b) {
    Term both[] = {a, b};
    Substitution ren = canonical_renaming(both);
    return std::pair<Term, Term>(apply(ren, a), apply(ren, b));
  };
  for (Index i : equations_.indices()) {
    const Equation& eq = equations_.at(i);
    if (eq.lhs == eq.rhs) {
      log_.emplace_back(DeleteStep{i, std::nullopt});
      equations_.erase(i);
      caches_.simplify.erase(i);
      skipped_.erase(i);
      continue;
    }
    auto key = canonical(eq.lhs, eq.rhs);
    auto it = seen.find(key);
    if (it == seen.end()) it = seen.find(canonical(eq.rhs, eq.lhs));
    if (it != seen.end()) {
      log_.emplace_back(DeleteStep{i, it->second});
      equations_.erase(i);
      caches_.simplify.erase(i);
      skipped_.erase(i);
      continue;
    }
    seen.emplace(std::move(key), i);
  }
}

bool Completion::success_check() {
  if (!equations_.empty()) return false;
  deadline_.check();
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i : rules_.indices()) {
    for (Index j : rules_.indices()) {
      if (!config_.caching || !caches_.overlaps.contains({i, j})) pairs.emplace_back(i, j);
    }
  }
  const NormalizeOptions options = normalize_options();
  auto joinable = pool_.map(pairs.size(), [&](std::size_t k) {
    for (const CriticalPair& cp : critical_pairs_between(rules_, pairs[k].first, pairs[k].second,
                                                         config_.indexing)) {
      if (!(normalize(cp.left, rules_, options).term == normalize(cp.right, rules_, options).term)) {
        return false;
      }
    }
    return true;
  });
  if (!std::all_of(joinable.begin(), joinable.end(), [](bool b) { return b; })) return false;
  if (config_.caching) {
    for (const auto& p : pairs) caches_.overlaps.insert(p);
  }
  return true;
}

std::optional<Index> Completion::choose_equation() const {
  std::optional<Index> best;
  std::uint64_t best_size = 0;
  for (const auto& [i, eq] : equations_.equations()) {
    if (skipped_.contains(i)) continue;
    std::uint64_t size = std::uint64_t(term_size(eq.lhs)) + term_size(eq.rhs);
    if (!best || size < best_size) {
      best = i;
      best_size = size;
    }
  }
  return best;
}

bool Completion::orient(Index index) {
  const Equation eq = equations_.at(index);
  if (const auto* tool = std::get_if<ExternalTool>(&config_.backend)) {
    return orient_external(eq, tool->command);
  }
  auto o = order_->try_orient(eq.lhs, eq.rhs);
  if (!o) {
    skipped_.insert(index);
    return false;
  }
  Term lhs = o->left_to_right ? eq.lhs : eq.rhs;
  Term rhs = o->left_to_right ? eq.rhs : eq.lhs;
  equations_.erase(index);
  caches_.simplify.erase(index);
  Index rule = rules_.add(lhs, rhs);
  log_.emplace_back(OrientStep{index, rule, o->left_to_right, lhs, rhs, o->added, false});
  ++stats_.orientations;
  rules_changed();
  return true;
}

bool Completion::orient_external(const Equation& eq, const std::string& command) {
  std::vector<std::pair<Term, Term>> system;
  for (const auto& [i, r] : rules_.rules()) system.emplace_back(r.lhs, r.rhs);
  for (bool left_to_right : {true, false}) {
    const Term& lhs = left_to_right ? eq.lhs : eq.rhs;
    const Term& rhs = left_to_right ? eq.rhs : eq.lhs;
    try {
      validate_rule(lhs, rhs);
    } catch (const InvalidRule&) {
      continue;
    }
    deadline_.check();
    system.emplace_back(lhs, rhs);
    auto budget = config_.tool_timeout ? std::min(*config_.tool_timeout, deadline_.remaining())
                                       : deadline_.remaining();
    Verdict v = external_terminates(command, sig_, system, budget);
    system.pop_back();
    if (v != Verdict::Yes) continue;
    equations_.erase(eq.index);
    caches_.simplify.erase(eq.index);
    Index rule = rules_.add(lhs, rhs);
    log_.emplace_back(OrientStep{eq.index, rule, left_to_right, lhs, rhs, {}, true});
    ++stats_.orientations;
    rules_changed();
    return true;
  }
  deadline_.check();
  skipped_.insert(eq.index);
  return false;
}

bool Completion::orient_phase() {
  while (auto index = choose_equation()) {
    deadline_.check();
    if (orient(*index)) return true;
  }
  return false;
}

void Completion::compose_phase() {
  deadline_.check();
  const std::vector<Index> ids = rules_.indices();
  const NormalizeOptions options = normalize_options();

  auto results = pool_.map(ids.size(), [&](std::size_t k) {
    const Rule& rule = rules_.at(ids[k]);
    const Index self = rule.index;
    RuleScope scope;
    scope.allowed = [self](const Rule& r) { return r.index != self; };
    if (config_.caching) {
      if (auto it = caches_.compose.find(self); it != caches_.compose.end()) {
        const IndexSet* tried = &it->second;
        scope.untried = [tried](const Rule& r) { return !tried->contains(r.index); };
      }
    }
    return normalize(rule.rhs, rules_, options, scope);
  });

  std::unordered_set<Index> replaced;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const Index from = ids[k];
    Normalized& nf = results[k];
    if (nf.steps.empty()) {
      if (config_.caching) {
        auto& tried = caches_.compose[from];
        for (Index r : ids) {
          if (r != from) tried.insert(r);
        }
      }
      continue;
    }
    // Steps through a rule replaced earlier in this merge no longer replay;
    // redo this rule against the current system.
    bool stale = std::any_of(nf.steps.begin(), nf.steps.end(),
                             [&](const RewriteStep& s) { return replaced.contains(s.rule); });
    if (stale) {
      RuleScope scope;
      scope.allowed = [from](const Rule& r) { return r.index != from; };
      nf = normalize(rules_.at(from).rhs, rules_, options, scope);
      if (nf.steps.empty()) continue;
    }
    Term lhs = rules_.at(from).lhs;
    rules_.erase(from);
    caches_.compose.erase(from);
    Index to = allocator_->next();
    rules_.insert(Rule{to, lhs, nf.term});
    if (auto it = caches_.collapse.find(from); it != caches_.collapse.end()) {
      // Same lhs, so collapse history carries over to the new index.
      caches_.collapse.emplace(to, std::move(it->second));
      caches_.collapse.erase(from);
    }
    replaced.insert(from);
    log_.emplace_back(ComposeStep{from, to, side_rewrites(nf.steps, true), nf.term});
  }
  if (!replaced.empty()) rules_changed();
}

void Completion::collapse_phase() {
  deadline_.check();
  const std::vector<Index> ids = rules_.indices();

  const auto scope_for = [this](const Rule& rule, const IndexSet* tried) {
    RuleScope scope;
    const Index self = rule.index;
    const Term lhs = rule.lhs;
    scope.allowed = [self, lhs](const Rule& r) {
      return r.index != self && encompassment_strict(lhs, r.lhs);
    };
    if (tried) scope.untried = [tried](const Rule& r) { return !tried->contains(r.index); };
    return scope;
  };

  auto results = pool_.map(ids.size(), [&](std::size_t k) {
    const Rule& rule = rules_.at(ids[k]);
    const IndexSet* tried = nullptr;
    if (config_.caching) {
      if (auto it = caches_.collapse.find(rule.index); it != caches_.collapse.end()) tried = &it->second;
    }
    return rewrite_once(rule.lhs, rules_, config_.indexing, scope_for(rule, tried));
  });

  bool changed = false;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const Index index = ids[k];
    std::optional<RewriteStep>& step = results[k];
    if (!step) {
      if (config_.caching) {
        auto& tried = caches_.collapse[index];
        for (Index r : ids) {
          if (r != index) tried.insert(r);
        }
      }
      continue;
    }
    if (!rules_.contains(step->rule)) {
      // The collapsing rule left R earlier in this merge.
      step = rewrite_once(rules_.at(index).lhs, rules_, config_.indexing,
                          scope_for(rules_.at(index), nullptr));
      if (!step) continue;
    }
    const Rule rule = rules_.at(index);
    rules_.erase(index);
    caches_.compose.erase(index);
    caches_.collapse.erase(index);
    Index eq = equations_.add(step->result, rule.rhs);
    log_.emplace_back(CollapseStep{index, eq, step->rule, step->position, step->result, rule.rhs});
    changed = true;
  }
  if (changed) rules_changed();
}

void Completion::deduce_phase() {
  deadline_.check();
  const std::vector<Index> ids = rules_.indices();
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i : ids) {
    for (Index j : ids) {
      if (!config_.caching || !caches_.overlaps.contains({i, j})) pairs.emplace_back(i, j);
    }
  }
  if (pairs.empty()) return;

  // Per outer rule: its function positions and, with indexing, the inner
  // rules the index admits at each of them.
  std::vector<Index> outers;
  for (const auto& p : pairs) outers.push_back(p.second);
  std::sort(outers.begin(), outers.end());
  outers.erase(std::unique(outers.begin(), outers.end()), outers.end());
  auto candidates = pool_.map(outers.size(), [&](std::size_t k) {
    return outer_candidates(rules_, rules_.at(outers[k]), config_.indexing);
  });
  std::unordered_map<Index, const OuterCandidates*> by_outer;
  for (std::size_t k = 0; k < outers.size(); ++k) by_outer.emplace(outers[k], &candidates[k]);

  auto results = pool_.map(pairs.size(), [&](std::size_t k) {
    if ((k & 255) == 0) deadline_.check();
    const auto [i, j] = pairs[k];
    std::vector<CriticalPair> out;
    overlap_rules(rules_.at(i), rules_.at(j), positions_for(*by_outer.at(j), i, config_.indexing), out);
    return out;
  });

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    for (CriticalPair& cp : results[k]) {
      Term view[] = {cp.left, cp.right, cp.peak};
      Substitution ren = canonical_renaming(view);
      Term lhs = apply(ren, cp.left);
      Term rhs = apply(ren, cp.right);
      Index eq = equations_.add(lhs, rhs);
      log_.emplace_back(DeduceStep{cp.source.inner, cp.source.outer, cp.source.position,
                                   apply(ren, cp.peak), eq, lhs, rhs});
      ++stats_.critical_pairs;
    }
    if (config_.caching) caches_.overlaps.insert(pairs[k]);
  }
}

ProofTrace Completion::trace() const {
  ProofTrace t;
  t.order = describe(config_.backend);
  if (order_) {
    t.initial_precedence = order_->seeded();
    t.precedence = order_->precedence().pairs();
    if (order_->kind() == OrderKind::Kbo) t.weights = order_->weights();
  }
  t.initial = initial_;
  t.steps = log_;
  for (const auto& [i, r] : rules_.rules()) t.rules.push_back(r);
  for (const auto& [i, e] : equations_.equations()) t.equations.push_back(e);
  return t;
}

CompletionResult Completion::run() {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome = Outcome::Fail;
  try {
    for (;;) {
      ++stats_.iterations;
      simplify_phase();
      delete_phase();
      if (success_check()) {
        outcome = Outcome::Success;
        break;
      }
      if (!equations_.empty() && !orient_phase()) {
        outcome = Outcome::Fail;
        break;
      }
      compose_phase();
      collapse_phase();
      deduce_phase();
    }
  } catch (const TimeoutError&) {
    outcome = Outcome::Timeout;
  }
  stats_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CompletionResult result;
  result.outcome = outcome;
  result.trace = trace();
  result.rules = result.trace.rules;
  result.equations = result.trace.equations;
  result.stats = stats_;
  return result;
}

CompletionResult complete(const Signature& sig, std::span<const std::pair<Term, Term>> equations,
                          const CompletionConfig& config) {
  Completion c(sig, equations, config);
  return c.run();
}

}  // namespace kbc
