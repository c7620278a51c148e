#include <gtest/gtest.h>

#include <map>
#include <random>

#include "kbc/index.hpp"
#include "oracles.hpp"

using namespace kbc;

namespace {

class IndexTest : public ::testing::Test {
 protected:
  Term T(std::string_view text) { return oracle::parse(sig, text); }

  Signature sig;
  DiscriminationTree tree;
};

TEST_F(IndexTest, LinearizeIsPreorderWithOneWildcard) {
  Term t = T("f(g(a), x)");
  PathString p = linearize(t);
  ASSERT_EQ(p.size(), 4u);
  EXPECT_EQ(p[0].key, *sig.find("f"));
  EXPECT_EQ(p[0].arity, 2u);
  EXPECT_EQ(p[1].key, *sig.find("g"));
  EXPECT_EQ(p[2].key, *sig.find("a"));
  EXPECT_TRUE(p[3].is_star());
  EXPECT_EQ(linearize(T("f(x, y)")), linearize(T("f(y, y)")));
}

TEST_F(IndexTest, InsertAndDuplicate) {
  tree.insert(1, T("f(g(a), x)"));
  EXPECT_EQ(tree.size(), 1u);
  EXPECT_EQ(tree.total_path_length(), 4u);
  EXPECT_THROW(tree.insert(1, T("f(a, b)")), IndexError);
  tree.insert(2, T("f(x, x)"));
  tree.insert(3, T("f(a, b)"));
  EXPECT_EQ(tree.size(), 3u);
}

TEST_F(IndexTest, RemoveRoundtrip) {
  Term t = T("f(g(a), x)");
  std::size_t nodes = tree.node_count();
  tree.insert(1, t);
  EXPECT_GT(tree.node_count(), nodes);
  tree.remove(1, t);
  EXPECT_TRUE(tree.empty());
  EXPECT_EQ(tree.node_count(), nodes);
  EXPECT_TRUE(tree.candidates_matching(T("f(g(a), b)")).empty());
  EXPECT_THROW(tree.remove(1, t), IndexError);
}

TEST_F(IndexTest, RemoveKeepsSiblingsOnSamePath) {
  tree.insert(1, T("f(x, y)"));
  tree.insert(2, T("f(y, x)"));
  tree.remove(1, T("f(x, y)"));
  EXPECT_EQ(tree.candidates_matching(T("f(a, b)")), std::vector<EntryId>{2});
  EXPECT_EQ(tree.candidates_unifiable(T("f(a, b)")), std::vector<EntryId>{2});
}

TEST_F(IndexTest, RemoveWithWrongTermIsUnknown) {
  tree.insert(1, T("f(a)"));
  EXPECT_THROW(tree.remove(1, T("f(b)")), IndexError);
  EXPECT_TRUE(tree.contains(1));
}

TEST_F(IndexTest, MatchingExamples) {
  tree.insert(1, T("f(g(a), x)"));
  EXPECT_EQ(tree.candidates_matching(T("f(g(a), b)")), std::vector<EntryId>{1});
  DiscriminationTree empty;
  EXPECT_TRUE(empty.candidates_matching(T("f(g(a), b)")).empty());
  DiscriminationTree other;
  other.insert(1, T("f(a, b)"));
  EXPECT_TRUE(other.candidates_matching(T("g(a)")).empty());
}

TEST_F(IndexTest, UnifiableExamples) {
  DiscriminationTree a;
  a.insert(1, T("f(x, b)"));
  EXPECT_EQ(a.candidates_unifiable(T("f(a, y)")), std::vector<EntryId>{1});
  DiscriminationTree b;
  b.insert(1, T("f(a, a)"));
  EXPECT_TRUE(b.candidates_unifiable(T("g(x)")).empty());
  DiscriminationTree c;
  c.insert(1, T("k(a)"));
  EXPECT_EQ(c.candidates_unifiable(T("x")), std::vector<EntryId>{1});
}

TEST_F(IndexTest, QueryWildcardSkipsStoredSubterm) {
  tree.insert(1, T("f(g(h(a)), b)"));
  tree.insert(2, T("f(g(h(a)), c)"));
  EXPECT_EQ(tree.candidates_unifiable(T("f(x, b)")), std::vector<EntryId>{1});
  EXPECT_TRUE(tree.candidates_matching(T("f(x, b)")).empty());
}

TEST_F(IndexTest, RootClashVisitsOnlyTheRoot) {
  for (int i = 0; i < 50; ++i) tree.insert(i + 1, T("f(g(c" + std::to_string(i) + "), x)"));
  RetrievalStats stats;
  EXPECT_TRUE(tree.candidates_unifiable(T("h(a)"), &stats).empty());
  EXPECT_LE(stats.nodes_visited, 1u);
}

// --- Randomized oracle comparison ------------------------------------------

class IndexProperties : public ::testing::TestWithParam<int> {};

TEST_P(IndexProperties, CandidatesAreSupersetsAndExactAfterFiltering) {
  Signature sig;
  auto rs = oracle::make_signature(sig, 3, 2, 2);
  std::mt19937 rng(GetParam());
  std::map<EntryId, Term> stored;
  DiscriminationTree tree;
  std::size_t n = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
  for (EntryId id = 1; id <= n; ++id) {
    Term t = oracle::random_term(rng, rs, 4, 3);
    stored.emplace(id, t);
    tree.insert(id, t);
  }
  // some removals, to exercise pruning
  for (EntryId id = 1; id <= n; id += 4) {
    tree.remove(id, stored.at(id));
    stored.erase(id);
  }
  for (int q = 0; q < 10; ++q) {
    Term query = oracle::random_term(rng, rs, 4, 3);
    std::vector<EntryId> exact_match, exact_unify;
    const VarId offset = 16;
    for (const auto& [id, t] : stored) {
      if (oracle::match(t, query)) exact_match.push_back(id);
      if (oracle::unify(oracle::shift(t, offset), query) == oracle::Unify::Ok) exact_unify.push_back(id);
    }
    RetrievalStats ms, us;
    auto cm = tree.candidates_matching(query, &ms);
    auto cu = tree.candidates_unifiable(query, &us);
    EXPECT_TRUE(std::is_sorted(cm.begin(), cm.end()));
    EXPECT_TRUE(std::includes(cm.begin(), cm.end(), exact_match.begin(), exact_match.end()));
    EXPECT_TRUE(std::includes(cu.begin(), cu.end(), exact_unify.begin(), exact_unify.end()));
    std::vector<EntryId> fm, fu;
    for (EntryId id : cm) {
      if (oracle::match(stored.at(id), query)) fm.push_back(id);
    }
    for (EntryId id : cu) {
      if (oracle::unify(oracle::shift(stored.at(id), offset), query) == oracle::Unify::Ok) fu.push_back(id);
    }
    EXPECT_EQ(fm, exact_match);
    EXPECT_EQ(fu, exact_unify);
    EXPECT_LE(ms.nodes_visited, tree.total_path_length() + 1);
    EXPECT_LE(us.nodes_visited, tree.total_path_length() + 1);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, IndexProperties, ::testing::Range(1, 101));

}  // namespace
