#pragma once

// First-order terms, positions, substitutions, unification and matching.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kbc {

using SymbolId = std::uint32_t;
using VarId = std::uint32_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidPosition : public Error {
 public:
  using Error::Error;
};

class SignatureError : public Error {
 public:
  using Error::Error;
};

/// An immutable, shareable first-order term. Copies are cheap (one refcount).
class Term {
 public:
  static Term variable(VarId v);
  static Term apply(SymbolId f, std::vector<Term> args = {});

  bool is_var() const { return node_->is_var; }
  VarId var() const { return node_->id; }
  SymbolId symbol() const { return node_->id; }
  std::size_t arity() const { return node_->args.size(); }
  std::span<const Term> args() const { return node_->args; }
  const Term& arg(std::size_t i) const { return node_->args[i]; }

  /// Number of symbol and variable occurrences.
  std::uint32_t size() const { return node_->size; }
  std::uint32_t depth() const { return node_->depth; }
  std::size_t hash() const { return node_->hash; }
  bool ground() const { return node_->var_bound == 0; }
  /// One past the largest variable id occurring in the term (0 when ground).
  VarId var_bound() const { return node_->var_bound; }

  bool same_node(const Term& other) const { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    bool is_var = false;
    std::uint32_t id = 0;
    std::vector<Term> args;
    std::uint32_t size = 1;
    std::uint32_t depth = 1;
    VarId var_bound = 0;
    std::size_t hash = 0;
  };

  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

struct Symbol {
  std::string name;
  std::uint32_t arity = 0;
};

/// Function symbols and named variables of one problem. Symbol ids follow
/// creation order, which also serves as the tie-break order wherever the
/// engine needs a deterministic symbol ordering.
class Signature {
 public:
  SymbolId intern(std::string_view name, std::uint32_t arity);
  std::optional<SymbolId> find(std::string_view name) const;
  const Symbol& symbol(SymbolId f) const { return symbols_.at(f); }
  std::size_t symbol_count() const { return symbols_.size(); }
  const std::vector<Symbol>& symbols() const { return symbols_; }

  VarId variable(std::string_view name);
  std::optional<VarId> find_variable(std::string_view name) const;
  std::size_t named_variable_count() const { return var_names_.size(); }
  /// Declared name for named variables, otherwise a generated name that does
  /// not collide with any declared identifier.
  std::string variable_name(VarId v) const;

  /// Arity-checked constructor.
  Term make(SymbolId f, std::vector<Term> args = {}) const;
  Term make(std::string_view name, std::vector<Term> args = {}) const;

 private:
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> symbol_ids_;
  std::vector<std::string> var_names_;
  std::unordered_map<std::string, VarId> var_ids_;
};

/// Path of 1-based argument indices from the root; the empty path is the root.
class Position {
 public:
  Position() = default;
  explicit Position(std::vector<std::uint32_t> path) : path_(std::move(path)) {}
  Position(std::initializer_list<std::uint32_t> path) : path_(path) {}

  bool is_root() const { return path_.empty(); }
  std::size_t length() const { return path_.size(); }
  const std::vector<std::uint32_t>& path() const { return path_; }
  Position child(std::uint32_t i) const;

  std::string to_string() const;
  static Position parse(std::string_view text);

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;

 private:
  std::vector<std::uint32_t> path_;
};

/// Finite map from variables to terms. Kept small and flat: substitutions in
/// this engine bind a handful of variables.
class Substitution {
 public:
  using Binding = std::pair<VarId, Term>;

  Substitution() = default;
  Substitution(std::initializer_list<Binding> bindings);

  const Term* lookup(VarId v) const;
  /// Adds or replaces a binding. Binding a variable to itself erases it.
  void bind(VarId v, Term t);
  /// Adds or replaces a binding, keeping x -> x. Matchers use this so a
  /// repeated pattern variable stays bound.
  void assign(VarId v, Term t);
  bool contains(VarId v) const { return lookup(v) != nullptr; }
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  const std::vector<Binding>& bindings() const { return bindings_; }
  /// Variables not bound to themselves.
  std::vector<VarId> domain() const;

  /// Order-insensitive equality of the binding maps, ignoring x -> x.
  friend bool operator==(const Substitution& a, const Substitution& b);

 private:
  std::vector<Binding> bindings_;
};

Term apply(const Substitution& sigma, const Term& t);

/// Composition: apply(compose(first, second), t) == apply(second, apply(first, t)).
Substitution compose(const Substitution& first, const Substitution& second);

Term subterm_at(const Term& t, const Position& p);
Term replace_at(const Term& t, const Position& p, Term s);
bool valid_position(const Term& t, const Position& p);

/// All positions in preorder; function positions only when requested.
std::vector<Position> positions(const Term& t);
std::vector<Position> function_positions(const Term& t);

std::uint32_t term_size(const Term& t);

/// Distinct variables in order of first (preorder) occurrence.
std::vector<VarId> variables(const Term& t);
bool occurs(VarId v, const Term& t);

enum class UnifyFailure { None, Clash, OccursCheck };

struct UnifyResult {
  std::optional<Substitution> mgu;
  UnifyFailure failure = UnifyFailure::None;

  explicit operator bool() const { return mgu.has_value(); }
};

/// Most general idempotent unifier. Iterative, occurs check always on.
UnifyResult unify(const Term& s, const Term& t);

/// Matcher binding only pattern variables: apply(result, pattern) == subject.
std::optional<Substitution> match(const Term& pattern, const Term& subject);

/// Same as match, extending an existing partial matcher.
bool match_into(const Term& pattern, const Term& subject, Substitution& sigma);

/// Variant of `t` whose variables are disjoint from `avoid`. Fresh variables
/// are allocated above every id in `avoid` and in `t`, in order of first
/// occurrence, so the result is deterministic.
Term rename_apart(const Term& t, std::span<const VarId> avoid);

/// Shifts every variable id by `offset`.
Term shift_variables(const Term& t, VarId offset);

/// Renaming that maps the variables of the given terms, in order of first
/// occurrence across them, onto 0, 1, 2, ...
Substitution canonical_renaming(std::span<const Term> terms);

/// Equal up to a bijective renaming of variables.
bool is_variant(const Term& a, const Term& b);

std::string to_string(const Term& t, const Signature& sig);

}  // namespace kbc

template <>
struct std::hash<kbc::Term> {
  std::size_t operator()(const kbc::Term& t) const noexcept { return t.hash(); }
};
