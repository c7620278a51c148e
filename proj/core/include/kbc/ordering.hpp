#pragma once

// Reduction orders for Orient: LPO and KBO over a precedence that is built
// on the fly, and the child-process protocol for external termination tools.

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kbc/term.hpp"

namespace kbc {

using SymbolPair = std::pair<SymbolId, SymbolId>;

class OrderingError : public Error {
 public:
  using Error::Error;
};

/// Strict partial order on symbols, stored transitively closed.
class Precedence {
 public:
  Precedence() = default;
  Precedence(std::initializer_list<SymbolPair> pairs);

  bool greater(SymbolId f, SymbolId g) const {
    return f < gt_.size() && g < gt_[f].size() && gt_[f][g];
  }
  bool comparable(SymbolId f, SymbolId g) const { return greater(f, g) || greater(g, f); }
  /// True when adding f > g keeps the order irreflexive.
  bool can_add(SymbolId f, SymbolId g) const { return f != g && !greater(g, f); }
  /// Adds f > g and closes transitively. Throws OrderingError on a cycle.
  void add(SymbolId f, SymbolId g);
  /// Every pair of the closure, sorted.
  std::vector<SymbolPair> pairs() const;

  friend bool operator==(const Precedence& a, const Precedence& b) { return a.pairs() == b.pairs(); }

 private:
  void grow(std::size_t n);

  std::vector<std::vector<std::uint8_t>> gt_;
};

class KboWeights {
 public:
  KboWeights() = default;
  /// Variable weight `w0`, every symbol of `sig` weighted `symbol_weight`.
  static KboWeights uniform(const Signature& sig, std::uint32_t w0 = 1,
                            std::uint32_t symbol_weight = 1);

  std::uint32_t variable_weight() const { return w0_; }
  std::uint32_t weight(SymbolId f) const { return f < weights_.size() ? weights_[f] : default_; }
  void set_weight(SymbolId f, std::uint32_t w);
  void set_arity(SymbolId f, std::uint32_t arity);
  std::size_t symbol_count() const { return arities_.size(); }
  std::uint32_t arity(SymbolId f) const { return arities_[f]; }

  /// Throws OrderingError unless w0 > 0, constants weigh at least w0, and every
  /// unary symbol of weight zero is maximal in `prec`.
  void check_admissible(const Precedence& prec) const;
  bool admissible(const Precedence& prec) const;

 private:
  std::uint32_t w0_ = 1;
  std::uint32_t default_ = 1;
  std::vector<std::uint32_t> weights_;
  std::vector<std::uint32_t> arities_;
};

bool lpo_gt(const Precedence& prec, const Term& s, const Term& t);
bool kbo_gt(const KboWeights& w, const Precedence& prec, const Term& s, const Term& t);

enum class OrderKind { Lpo, Kbo };

struct ExternalTool {
  std::string command;
};

/// Exactly one reduction-order backend per completion run.
using TerminationBackend = std::variant<OrderKind, ExternalTool>;

std::string describe(const TerminationBackend& backend);

struct Orientation {
  bool left_to_right = true;
  std::vector<SymbolPair> added;  // precedence pairs committed by this step
};

/// Internal order state for one run: the committed precedence plus fixed KBO
/// weights. Extensions found by try_orient are committed permanently.
struct OrderLimits {
  std::size_t max_extension = 3;
  std::size_t max_evaluations = 200'000;
};

class OrderState {
 public:
  using Limits = OrderLimits;

  /// For KBO, the precedence starts with every zero-weight unary symbol above
  /// all others; throws OrderingError when the weights admit no precedence.
  OrderState(OrderKind kind, KboWeights weights = {}, Limits limits = {});

  OrderKind kind() const { return kind_; }
  const Precedence& precedence() const { return prec_; }
  const KboWeights& weights() const { return weights_; }
  const std::vector<SymbolPair>& seeded() const { return seeded_; }

  bool greater(const Term& s, const Term& t) const;
  bool greater(const Precedence& prec, const Term& s, const Term& t) const;

  /// Smallest precedence extension (by pair count; candidate sets enumerated
  /// in symbol-creation order) under which s > t or t > s. At equal size the
  /// s > t direction wins. Commits on success; nullopt when unorientable.
  std::optional<Orientation> try_orient(const Term& s, const Term& t);

 private:
  bool usable(const Precedence& prec) const;

  OrderKind kind_;
  Precedence prec_;
  KboWeights weights_;
  Limits limits_;
  std::vector<SymbolPair> seeded_;
};

enum class Verdict { Yes, No, Maybe };

std::string_view to_string(Verdict v);

class ExternalToolError : public Error {
 public:
  using Error::Error;
};

/// Interprets the first line of a termination tool's output.
Verdict parse_verdict(std::string_view output);

/// Runs `command` through /bin/sh, writes the TPDB rendering of `rules` to
/// its standard input and reads the verdict from the first output line. A
/// timeout kills the tool and yields Maybe.
Verdict external_terminates(const std::string& command, const Signature& sig,
                            std::span<const std::pair<Term, Term>> rules,
                            std::chrono::milliseconds timeout);

}  // namespace kbc
