#include <benchmark/benchmark.h>

#include "kbc/completion.hpp"
#include "kbc/tpdb.hpp"
#include "stress.hpp"

namespace {

const kbc::ProblemFile& chain() {
  static const kbc::ProblemFile problem = kbc::parse_problem(stress::chain_system(120, 6));
  return problem;
}

const kbc::ProblemFile& words() {
  static const kbc::ProblemFile problem = kbc::parse_problem(stress::word_system(320, 9));
  return problem;
}

// Range argument: bit 0 caching, bit 1 indexing, bit 2 parallel.
void BM_CompleteChain(benchmark::State& state) {
  const auto& problem = chain();
  auto eqs = problem.equations();
  kbc::CompletionConfig config;
  config.caching = state.range(0) & 1;
  config.indexing = state.range(0) & 2;
  config.parallel = state.range(0) & 4;
  config.timeout = std::chrono::minutes(10);
  std::size_t rules = 0;
  for (auto _ : state) {
    auto result = kbc::complete(problem.signature, eqs, config);
    rules = result.rules.size();
    benchmark::DoNotOptimize(result.outcome);
  }
  state.counters["rules"] = static_cast<double>(rules);
}
BENCHMARK(BM_CompleteChain)->DenseRange(0, 7)->Unit(benchmark::kMillisecond);

void BM_DeduceWords(benchmark::State& state) {
  const auto& problem = words();
  kbc::CompletionConfig config;
  config.parallel = state.range(0) > 1;
  config.workers = static_cast<std::size_t>(state.range(0));
  std::size_t pairs = 0;
  for (auto _ : state) {
    state.PauseTiming();
    kbc::Completion c(problem.signature, {}, config);
    for (const auto& e : problem.entries) c.seed_rule(e.lhs, e.rhs);
    state.ResumeTiming();
    c.deduce_phase();
    pairs = c.equations().size();
  }
  state.counters["critical_pairs"] = static_cast<double>(pairs);
}
BENCHMARK(BM_DeduceWords)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_GroupAxioms(benchmark::State& state) {
  auto problem = kbc::parse_problem("(VAR x y z)\n(RULES f(e,x) -> x f(i(x),x) -> e f(f(x,y),z) -> f(x,f(y,z)))\n");
  auto eqs = problem.equations();
  kbc::CompletionConfig config;
  config.parallel = false;
  for (auto _ : state) benchmark::DoNotOptimize(kbc::complete(problem.signature, eqs, config).outcome);
}
BENCHMARK(BM_GroupAxioms);

}  // namespace

BENCHMARK_MAIN();
