#include "kbc/index.hpp"

#include <algorithm>

namespace kbc {

struct DiscriminationTree::Node {
  struct Edge {
    PathSymbol symbol;
    std::unique_ptr<Node> child;
  };

  // Sorted by key; the wildcard (key -1) is always first when present.
  std::vector<Edge> edges;
  std::vector<EntryId> entries;

  Node* find(std::int64_t key) const {
    auto it = std::lower_bound(edges.begin(), edges.end(), key,
                               [](const Edge& e, std::int64_t k) { return e.symbol.key < k; });
    return it != edges.end() && it->symbol.key == key ? it->child.get() : nullptr;
  }

  Node* find_or_add(const PathSymbol& s) {
    auto it = std::lower_bound(edges.begin(), edges.end(), s.key,
                               [](const Edge& e, std::int64_t k) { return e.symbol.key < k; });
    if (it != edges.end() && it->symbol.key == s.key) return it->child.get();
    it = edges.insert(it, Edge{s, std::make_unique<Node>()});
    return it->child.get();
  }

  bool dead() const { return edges.empty() && entries.empty(); }

  std::size_t count() const {
    std::size_t n = 1;
    for (const auto& e : edges) n += e.child->count();
    return n;
  }
};

namespace {

// Flattened query with the index one past each subterm (the "jump").
struct FlatTerm {
  std::vector<const Term*> nodes;
  std::vector<std::uint32_t> next;

  explicit FlatTerm(const Term& t) {
    nodes.reserve(t.size());
    next.resize(t.size());
    fill(t);
  }

  void fill(const Term& t) {
    auto at = static_cast<std::uint32_t>(nodes.size());
    nodes.push_back(&t);
    if (!t.is_var()) {
      for (const Term& a : t.args()) fill(a);
    }
    next[at] = static_cast<std::uint32_t>(nodes.size());
  }
};

using Node = DiscriminationTree::Node;

}  // namespace

PathString linearize(const Term& t) {
  PathString out;
  out.reserve(t.size());
  std::vector<const Term*> stack{&t};
  while (!stack.empty()) {
    const Term* cur = stack.back();
    stack.pop_back();
    if (cur->is_var()) {
      out.push_back(PathSymbol{});
      continue;
    }
    out.push_back(PathSymbol{static_cast<std::int64_t>(cur->symbol()),
                             static_cast<std::uint32_t>(cur->arity())});
    for (std::size_t i = cur->arity(); i-- > 0;) stack.push_back(&cur->arg(i));
  }
  return out;
}

DiscriminationTree::DiscriminationTree() : root_(std::make_unique<Node>()) {}
DiscriminationTree::~DiscriminationTree() = default;
DiscriminationTree::DiscriminationTree(DiscriminationTree&&) noexcept = default;
DiscriminationTree& DiscriminationTree::operator=(DiscriminationTree&&) noexcept = default;

std::size_t DiscriminationTree::node_count() const { return root_->count(); }

void DiscriminationTree::insert(EntryId id, const Term& t) {
  if (ids_.contains(id)) throw IndexError("duplicate index entry " + std::to_string(id));
  PathString path = linearize(t);
  Node* node = root_.get();
  for (const PathSymbol& s : path) node = node->find_or_add(s);
  auto it = std::lower_bound(node->entries.begin(), node->entries.end(), id);
  node->entries.insert(it, id);
  ids_.insert(id);
  total_path_length_ += path.size();
}

void DiscriminationTree::remove(EntryId id, const Term& t) {
  const auto unknown = [id] { return IndexError("unknown index entry " + std::to_string(id)); };
  if (!ids_.contains(id)) throw unknown();
  PathString path = linearize(t);
  std::vector<Node*> trail{root_.get()};
  for (const PathSymbol& s : path) {
    Node* next = trail.back()->find(s.key);
    if (!next) throw unknown();
    trail.push_back(next);
  }
  auto& entries = trail.back()->entries;
  auto it = std::lower_bound(entries.begin(), entries.end(), id);
  if (it == entries.end() || *it != id) throw unknown();
  entries.erase(it);
  ids_.erase(id);
  total_path_length_ -= path.size();

  // Prune the now-dead suffix of the path.
  for (std::size_t depth = path.size(); depth > 0; --depth) {
    Node* child = trail[depth];
    if (!child->dead()) break;
    auto& edges = trail[depth - 1]->edges;
    edges.erase(std::find_if(edges.begin(), edges.end(),
                             [child](const Node::Edge& e) { return e.child.get() == child; }));
  }
}

namespace {

struct Retrieval {
  const FlatTerm& query;
  std::vector<EntryId>& out;
  RetrievalStats* stats;
  bool unifiable;

  void collect(const Node* node) {
    out.insert(out.end(), node->entries.begin(), node->entries.end());
  }

  void visit(const Node* node, std::uint32_t pos) {
    if (stats) ++stats->nodes_visited;
    if (pos == query.nodes.size()) {
      collect(node);
      return;
    }
    const Term& q = *query.nodes[pos];
    if (q.is_var()) {
      if (!unifiable) {
        // A subject variable is only generalized by a stored variable.
        if (const Node* star = node->find(PathSymbol::kStar)) visit(star, pos + 1);
        return;
      }
      // Query variable: skip one whole stored subterm along every edge.
      for (const auto& e : node->edges) skip(e.child.get(), e.symbol.arity, pos + 1);
      return;
    }
    if (const Node* star = node->find(PathSymbol::kStar)) visit(star, query.next[pos]);
    if (const Node* same = node->find(static_cast<std::int64_t>(q.symbol()))) {
      visit(same, pos + 1);
    }
  }

  // `node` was reached by consuming one stored symbol; `pending` more stored
  // subterms remain before the skipped subterm is complete.
  void skip(const Node* node, std::uint32_t pending, std::uint32_t resume) {
    if (pending == 0) {
      visit(node, resume);
      return;
    }
    if (stats) ++stats->nodes_visited;
    for (const auto& e : node->edges) skip(e.child.get(), pending - 1 + e.symbol.arity, resume);
  }
};

std::vector<EntryId> retrieve(const Node* root, const Term& t, RetrievalStats* stats,
                              bool unifiable) {
  std::vector<EntryId> out;
  if (root->dead()) return out;
  FlatTerm flat(t);
  Retrieval r{flat, out, stats, unifiable};
  r.visit(root, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<EntryId> DiscriminationTree::candidates_matching(const Term& subject,
                                                             RetrievalStats* stats) const {
  return retrieve(root_.get(), subject, stats, false);
}

std::vector<EntryId> DiscriminationTree::candidates_unifiable(const Term& query,
                                                              RetrievalStats* stats) const {
  return retrieve(root_.get(), query, stats, true);
}

}  // namespace kbc
