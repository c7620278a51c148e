#pragma once

// Command-line runs and the flag-combination benchmark grid.

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kbc/completion.hpp"
#include "kbc/tpdb.hpp"

namespace kbcv {

enum ExitCode : int {
  kSuccess = 0,
  kFail = 1,
  kTimeout = 2,
  kInputError = 3,
  kRunError = 4,
};

struct RunConfig {
  bool automatic = true;
  bool proof = false;
  int timeout_seconds = 60;
  std::optional<std::string> method;  // "lpo", "kbo", or an external command; default lpo
  bool caching = true;
  bool indexing = true;
  bool parallel = true;
  std::filesystem::path input;
};

kbc::TerminationBackend backend_for(const std::optional<std::string>& method);
kbc::CompletionConfig completion_config(const RunConfig& config);
int exit_code(kbc::Outcome outcome);

std::string read_file(const std::filesystem::path& path);

/// Rules rendered one per line with variables renamed canonically, sorted.
/// Equal for two systems exactly when they agree up to rule indices and
/// variable names.
std::vector<std::string> fingerprint(const kbc::Signature& sig, std::span<const kbc::Rule> rules);

/// Parses, completes and prints. Returns the process exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// --- Benchmark grid --------------------------------------------------------

struct FlagSet {
  bool caching = true;
  bool indexing = true;
  bool parallel = true;
};

/// "KBCV" plus one suffix per disabled feature, e.g. "KBCV-b-i".
std::string label(const FlagSet& flags);

/// The eight flag combinations in the column order of the published table.
std::vector<FlagSet> grid_columns();

struct GridCell {
  std::string verdict;  // SUCCESS, FAIL, TIMEOUT or ERROR
  double seconds = 0;
  std::size_t rules = 0;
  std::vector<std::string> fingerprint;
  std::string error;
};

struct GridRow {
  std::string input;
  std::vector<GridCell> cells;  // parallel to GridReport::columns
};

struct GridReport {
  std::vector<FlagSet> columns;
  std::vector<GridRow> rows;

  std::size_t completed(std::size_t column) const;
  double total_time(std::size_t column) const;  // over completed runs
  double average_time(std::size_t column) const;
  /// Every successful cell of the row has the same final system and all
  /// cells share one verdict.
  bool transparent(std::size_t row) const;
};

struct GridOptions {
  int timeout_seconds = 60;
  std::optional<std::string> method;
  bool concurrent_cells = false;  // smoke testing only: timings contend
};

GridReport bench_grid(const std::vector<std::filesystem::path>& inputs, const GridOptions& options);

/// Completed / total time / avg. time rows, then per-input rows for inputs
/// that not every configuration completed.
void print_grid(std::ostream& out, const GridReport& report);
std::string grid_json(const GridReport& report);

}  // namespace kbcv
