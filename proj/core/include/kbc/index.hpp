#pragma once

// Discrimination tree over preorder-linearized terms. Every variable is
// abstracted to one wildcard, so retrievals return candidate supersets that
// callers post-filter with match() or unify().

#include <cstdint>
#include <memory>
#include <unordered_set>
#include <vector>

#include "kbc/term.hpp"

namespace kbc {

using EntryId = std::uint64_t;

class IndexError : public Error {
 public:
  using Error::Error;
};

/// One element of a linearized term: a function symbol or the wildcard.
struct PathSymbol {
  static constexpr std::int64_t kStar = -1;

  std::int64_t key = kStar;
  std::uint32_t arity = 0;

  bool is_star() const { return key == kStar; }
  friend bool operator==(const PathSymbol&, const PathSymbol&) = default;
};

using PathString = std::vector<PathSymbol>;

PathString linearize(const Term& t);

struct RetrievalStats {
  std::size_t nodes_visited = 0;
};

class DiscriminationTree {
 public:
  DiscriminationTree();
  ~DiscriminationTree();
  DiscriminationTree(DiscriminationTree&&) noexcept;
  DiscriminationTree& operator=(DiscriminationTree&&) noexcept;
  DiscriminationTree(const DiscriminationTree&) = delete;
  DiscriminationTree& operator=(const DiscriminationTree&) = delete;

  void insert(EntryId id, const Term& t);
  void remove(EntryId id, const Term& t);

  /// Ids whose stored term may generalize `subject`. Sorted ascending.
  std::vector<EntryId> candidates_matching(const Term& subject,
                                           RetrievalStats* stats = nullptr) const;
  /// Ids whose stored term may unify with `query`. Sorted ascending.
  std::vector<EntryId> candidates_unifiable(const Term& query,
                                            RetrievalStats* stats = nullptr) const;

  bool contains(EntryId id) const { return ids_.contains(id); }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  /// Sum of the path lengths of all stored entries.
  std::size_t total_path_length() const { return total_path_length_; }
  std::size_t node_count() const;

  struct Node;  // defined in index.cpp

 private:
  std::unique_ptr<Node> root_;
  std::unordered_set<EntryId> ids_;
  std::size_t total_path_length_ = 0;
};

}  // namespace kbc
