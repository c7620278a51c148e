#pragma once

// Knuth-Bendix completion: the six inference rules, result caches, critical
// pairs, and the automatic loop
//
//   Simplify -> Delete -> success check -> Orient -> Compose -> Collapse -> Deduce
//
// Deduce, Compose, Collapse and Simplify split into independent unit tasks
// over a frozen snapshot of (E, R). Results merge in task order, so runs with
// and without worker threads produce identical states and logs.

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "kbc/ordering.hpp"
#include "kbc/runtime.hpp"
#include "kbc/term.hpp"
#include "kbc/trs.hpp"

namespace kbc {

struct CompletionConfig {
  bool caching = true;
  bool indexing = true;
  bool parallel = true;
  std::size_t workers = 0;  // 0: default_worker_count()
  std::chrono::milliseconds timeout{60'000};
  TerminationBackend backend = OrderKind::Lpo;
  std::optional<KboWeights> kbo_weights;  // default: uniform weights
  OrderState::Limits order_limits;
  std::size_t step_bound = 100'000;
  std::optional<std::chrono::milliseconds> tool_timeout;  // default: remaining budget
};

struct Overlap {
  Index inner = 0;
  Index outer = 0;
  Position position;  // function position in the outer rule's lhs
  Substitution mgu;
};

/// The two one-step reducts of an overlap peak: `left` by the outer rule at
/// the root, `right` by the inner rule at the overlap position.
struct CriticalPair {
  Term left;
  Term right;
  Term peak;
  Overlap source;
};

/// Overlaps of rule `inner` (renamed apart) into the function positions of
/// rule `outer`'s lhs, excluding the root when inner == outer. With indexing,
/// positions are pre-filtered through the rule index.
std::vector<CriticalPair> critical_pairs_between(const RuleSet& rules, Index inner, Index outer,
                                                 bool indexing = true);

/// Sorted list of rule indices with a merge-style insert.
class IndexSet {
 public:
  bool contains(Index i) const;
  void insert(Index i);
  void insert_all(std::span<const Index> sorted);
  std::size_t size() const { return items_.size(); }
  const std::vector<Index>& items() const { return items_; }

 private:
  std::vector<Index> items_;
};

struct PairHash {
  std::size_t operator()(const std::pair<Index, Index>& p) const noexcept {
    return std::hash<Index>()(p.first * 0x9e3779b97f4a7c15ull ^ p.second);
  }
};

struct Caches {
  std::unordered_set<std::pair<Index, Index>, PairHash> overlaps;  // (inner, outer)
  std::unordered_map<Index, IndexSet> compose;   // rule -> rules tried on its rhs
  std::unordered_map<Index, IndexSet> collapse;  // rule -> rules tried on its lhs
  std::unordered_map<Index, IndexSet> simplify;  // equation -> rules tried on it
};

// --- Inference log ---------------------------------------------------------

/// One rewrite inside a Simplify, Compose or Collapse step. `rhs_side`
/// selects the equation side (always the rhs for Compose, lhs for Collapse).
struct SideRewrite {
  bool rhs_side = false;
  Index rule = 0;
  Position position;
};

struct DeduceStep {
  Index inner = 0;
  Index outer = 0;
  Position position;
  Term peak;
  Index equation = 0;
  Term lhs;
  Term rhs;
};

struct OrientStep {
  Index equation = 0;
  Index rule = 0;
  bool left_to_right = true;
  Term lhs;  // of the new rule
  Term rhs;
  std::vector<SymbolPair> precedence;  // pairs committed by this step
  bool external = false;
};

struct DeleteStep {
  Index equation = 0;
  std::optional<Index> duplicate_of;  // set when removed as a copy of a live equation
};

struct SimplifyStep {
  Index from = 0;
  Index to = 0;
  std::vector<SideRewrite> rewrites;
  Term lhs;
  Term rhs;
};

struct ComposeStep {
  Index from = 0;
  Index to = 0;
  std::vector<SideRewrite> rewrites;
  Term rhs;
};

struct CollapseStep {
  Index rule = 0;
  Index equation = 0;
  Index by = 0;
  Position position;
  Term lhs;  // of the new equation
  Term rhs;
};

using InferenceStep =
    std::variant<DeduceStep, OrientStep, DeleteStep, SimplifyStep, ComposeStep, CollapseStep>;

std::string_view inference_name(const InferenceStep& step);
std::vector<Index> consumed(const InferenceStep& step);
std::vector<Index> produced(const InferenceStep& step);

struct ProofTrace {
  std::string order;  // "lpo", "kbo" or "external:<command>"
  std::vector<SymbolPair> initial_precedence;  // pairs present before the first step
  std::vector<SymbolPair> precedence;  // final committed precedence
  std::optional<KboWeights> weights;
  std::vector<Equation> initial;
  std::vector<InferenceStep> steps;
  std::vector<Rule> rules;
  std::vector<Equation> equations;
};

// --- Completion ------------------------------------------------------------

enum class Outcome { Success, Fail, Timeout };

std::string_view to_string(Outcome o);

struct CompletionStats {
  std::size_t iterations = 0;
  std::size_t critical_pairs = 0;
  std::size_t orientations = 0;
  double seconds = 0;
};

struct CompletionResult {
  Outcome outcome = Outcome::Fail;
  std::vector<Rule> rules;
  std::vector<Equation> equations;
  ProofTrace trace;
  CompletionStats stats;
};

class Completion {
 public:
  Completion(const Signature& sig, std::span<const std::pair<Term, Term>> equations,
             CompletionConfig config = {});

  CompletionResult run();

  // Individual phases, in loop order.
  void simplify_phase();
  void delete_phase();
  bool success_check();
  std::optional<Index> choose_equation() const;
  bool orient(Index equation);
  /// Chooses and orients until one succeeds; false when every equation is skipped.
  bool orient_phase();
  void compose_phase();
  void collapse_phase();
  void deduce_phase();

  /// Puts a rule straight into R without a log entry. For setting up phase
  /// tests and benchmarks; a seeded state no longer replays from E0.
  Index seed_rule(Term lhs, Term rhs);

  const Signature& signature() const { return sig_; }
  const CompletionConfig& config() const { return config_; }
  const EquationSet& equations() const { return equations_; }
  const RuleSet& rules() const { return rules_; }
  const Caches& caches() const { return caches_; }
  const std::vector<InferenceStep>& log() const { return log_; }
  const std::vector<Equation>& initial() const { return initial_; }
  const OrderState* order() const { return order_ ? &*order_ : nullptr; }
  const std::unordered_set<Index>& skipped() const { return skipped_; }
  const CompletionStats& stats() const { return stats_; }

  ProofTrace trace() const;

 private:
  NormalizeOptions normalize_options() const;
  void rules_changed();
  bool orient_external(const Equation& eq, const std::string& command);

  const Signature& sig_;
  CompletionConfig config_;
  Deadline deadline_;
  std::shared_ptr<IndexAllocator> allocator_;
  EquationSet equations_;
  RuleSet rules_;
  Caches caches_;
  std::optional<OrderState> order_;
  std::unordered_set<Index> skipped_;
  std::vector<InferenceStep> log_;
  std::vector<Equation> initial_;
  CompletionStats stats_;
  TaskPool pool_;
};

CompletionResult complete(const Signature& sig, std::span<const std::pair<Term, Term>> equations,
                          const CompletionConfig& config = {});

}  // namespace kbc
