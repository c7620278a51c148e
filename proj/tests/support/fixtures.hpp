#pragma once

// Shared helpers for completion tests: loading bundled problems, running
// with a given flag set, and comparing final systems.

#include <filesystem>
#include <string>
#include <vector>

#include "kbc/completion.hpp"
#include "kbc/tpdb.hpp"

namespace fixtures {

std::filesystem::path data_dir();
std::vector<std::filesystem::path> bundled_problems();
kbc::ProblemFile load(const std::filesystem::path& path);

kbc::CompletionConfig flags(bool caching, bool indexing, bool parallel, std::size_t workers = 0);

/// Final rules rendered canonically (variables renamed, sorted).
std::vector<std::string> canonical_rules(const kbc::Signature& sig, std::span<const kbc::Rule> rules);

/// Random small equational systems that produce at least one critical pair
/// and complete under the default configuration within `budget`. Deterministic for a given seed.
struct RandomSystem {
  std::string name;
  kbc::Signature signature;
  std::vector<std::pair<kbc::Term, kbc::Term>> equations;
};
std::vector<RandomSystem> random_completable_systems(std::size_t count, unsigned seed,
                                                     std::chrono::milliseconds budget);

/// Success soundness: every critical pair joinable, every input equation's
/// sides share a normal form, every rule decreasing in the committed order.
/// Returns the first violation, empty when sound.
std::string soundness_violation(const kbc::Signature& sig, std::span<const std::pair<kbc::Term, kbc::Term>> input,
                                const kbc::CompletionResult& result, const kbc::CompletionConfig& config);

}  // namespace fixtures
