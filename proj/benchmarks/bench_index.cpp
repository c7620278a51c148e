#include <benchmark/benchmark.h>

#include <random>

#include "kbc/index.hpp"
#include "kbc/term.hpp"

namespace {

struct Workload {
  kbc::Signature sig;
  std::vector<kbc::Term> stored;
  std::vector<kbc::Term> queries;
};

kbc::Term random_term(std::mt19937& rng, const std::vector<kbc::SymbolId>& symbols, const kbc::Signature& sig,
                      int depth) {
  std::uniform_int_distribution<int> coin(0, 3);
  if (depth == 0 || coin(rng) == 0) return kbc::Term::variable(static_cast<kbc::VarId>(coin(rng) % 3));
  kbc::SymbolId f = symbols[std::uniform_int_distribution<std::size_t>(0, symbols.size() - 1)(rng)];
  std::vector<kbc::Term> args;
  for (std::uint32_t i = 0; i < sig.symbol(f).arity; ++i) args.push_back(random_term(rng, symbols, sig, depth - 1));
  return kbc::Term::apply(f, std::move(args));
}

const Workload& workload() {
  static const Workload w = [] {
    Workload w;
    std::vector<kbc::SymbolId> symbols;
    for (int i = 0; i < 4; ++i) symbols.push_back(w.sig.intern("c" + std::to_string(i), 0));
    for (int i = 0; i < 4; ++i) symbols.push_back(w.sig.intern("u" + std::to_string(i), 1));
    for (int i = 0; i < 4; ++i) symbols.push_back(w.sig.intern("b" + std::to_string(i), 2));
    std::mt19937 rng(42);
    for (int i = 0; i < 2000; ++i) w.stored.push_back(random_term(rng, symbols, w.sig, 6));
    for (int i = 0; i < 500; ++i) w.queries.push_back(random_term(rng, symbols, w.sig, 7));
    return w;
  }();
  return w;
}

void BM_TreeMatching(benchmark::State& state) {
  const auto& w = workload();
  kbc::DiscriminationTree tree;
  for (std::size_t i = 0; i < w.stored.size(); ++i) tree.insert(i + 1, w.stored[i]);
  std::size_t found = 0;
  for (auto _ : state) {
    for (const auto& q : w.queries) {
      for (kbc::EntryId id : tree.candidates_matching(q)) found += kbc::match(w.stored[id - 1], q).has_value();
    }
  }
  benchmark::DoNotOptimize(found);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * w.queries.size()));
}
BENCHMARK(BM_TreeMatching);

void BM_LinearMatching(benchmark::State& state) {
  const auto& w = workload();
  std::size_t found = 0;
  for (auto _ : state) {
    for (const auto& q : w.queries) {
      for (const auto& t : w.stored) found += kbc::match(t, q).has_value();
    }
  }
  benchmark::DoNotOptimize(found);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * w.queries.size()));
}
BENCHMARK(BM_LinearMatching);

void BM_TreeUnifiable(benchmark::State& state) {
  const auto& w = workload();
  kbc::DiscriminationTree tree;
  for (std::size_t i = 0; i < w.stored.size(); ++i) tree.insert(i + 1, w.stored[i]);
  std::size_t candidates = 0;
  for (auto _ : state) {
    for (const auto& q : w.queries) candidates += tree.candidates_unifiable(q).size();
  }
  benchmark::DoNotOptimize(candidates);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * w.queries.size()));
}
BENCHMARK(BM_TreeUnifiable);

}  // namespace
