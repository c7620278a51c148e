#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"

#ifndef KBCV_DATA_DIR
#error "KBCV_DATA_DIR must be defined"
#endif

namespace fixtures {

std::filesystem::path data_dir() { return KBCV_DATA_DIR; }

std::vector<std::filesystem::path> bundled_problems() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(data_dir())) {
    if (e.path().extension() == ".trs") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

kbc::ProblemFile load(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  return kbc::parse_problem(text.str());
}

kbc::CompletionConfig flags(bool caching, bool indexing, bool parallel, std::size_t workers) {
  kbc::CompletionConfig c;
  c.caching = caching;
  c.indexing = indexing;
  c.parallel = parallel;
  c.workers = workers;
  return c;
}

std::vector<std::string> canonical_rules(const kbc::Signature& sig, std::span<const kbc::Rule> rules) {
  std::vector<std::string> out;
  for (const auto& r : rules) {
    auto c = oracle::canonical({r.lhs, r.rhs});
    out.push_back(oracle::show(c[0], sig) + " -> " + oracle::show(c[1], sig));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<RandomSystem> random_completable_systems(std::size_t count, unsigned seed,
                                                     std::chrono::milliseconds budget) {
  std::vector<RandomSystem> out;
  std::mt19937 rng(seed);
  for (int attempt = 0; out.size() < count && attempt < 2000; ++attempt) {
    RandomSystem sys;
    sys.name = "random-" + std::to_string(seed) + "-" + std::to_string(attempt);
    std::uniform_int_distribution<int> small(0, 2);
    auto rs = oracle::make_signature(sys.signature, 1 + small(rng) % 2, 1 + small(rng) % 2, small(rng) % 2);
    for (const char* v : {"x", "y", "z"}) sys.signature.variable(v);
    int n = 2 + small(rng);
    for (int i = 0; i < n; ++i) {
      kbc::Term l = oracle::random_term(rng, rs, 3, 2);
      kbc::Term r = oracle::random_term(rng, rs, 3, 2);
      if (l == r) continue;
      sys.equations.emplace_back(l, r);
    }
    if (sys.equations.empty()) continue;
    kbc::CompletionConfig config;
    config.timeout = budget;
    config.parallel = false;
    try {
      auto result = kbc::complete(sys.signature, sys.equations, config);
      if (result.outcome != kbc::Outcome::Success || result.stats.critical_pairs == 0) continue;
    } catch (const kbc::Error&) {
      continue;
    }
    out.push_back(std::move(sys));
  }
  return out;
}

std::string soundness_violation(const kbc::Signature& sig, std::span<const std::pair<kbc::Term, kbc::Term>> input,
                                const kbc::CompletionResult& result, const kbc::CompletionConfig& config) {
  if (result.outcome != kbc::Outcome::Success) return "not a success";
  if (!result.equations.empty()) return "equations left";
  kbc::RuleSet rules;
  for (const auto& r : result.rules) rules.insert(r);
  std::vector<oracle::RuleTerm> rt;
  for (const auto& r : result.rules) rt.push_back({r.lhs, r.rhs});
  for (const auto& cp : oracle::critical_pairs(rt)) {
    if (!(kbc::normalize(cp.left, rules).term == kbc::normalize(cp.right, rules).term)) {
      return "critical pair not joinable: " + kbc::to_string(cp.left, sig) + " = " + kbc::to_string(cp.right, sig);
    }
  }
  for (const auto& [s, t] : input) {
    if (!(kbc::normalize(s, rules).term == kbc::normalize(t, rules).term)) {
      return "input equation not provable: " + kbc::to_string(s, sig) + " = " + kbc::to_string(t, sig);
    }
  }
  if (const auto* kind = std::get_if<kbc::OrderKind>(&config.backend)) {
    oracle::Prec prec(sig.symbol_count());
    for (auto [f, g] : result.trace.precedence) prec.add(f, g);
    oracle::Weights w;
    if (result.trace.weights) {
      w.w0 = result.trace.weights->variable_weight();
      for (kbc::SymbolId f = 0; f < sig.symbol_count(); ++f) w.w.push_back(result.trace.weights->weight(f));
    }
    for (const auto& r : result.rules) {
      bool ok = *kind == kbc::OrderKind::Lpo ? oracle::lpo(prec, r.lhs, r.rhs) : oracle::kbo(w, prec, r.lhs, r.rhs);
      if (!ok) return "rule not decreasing: " + kbc::to_string(r.lhs, sig) + " -> " + kbc::to_string(r.rhs, sig);
    }
  }
  return {};
}

}  // namespace fixtures
