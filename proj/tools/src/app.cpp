#include "kbcv/app.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "kbc/proof.hpp"
#include "kbc/runtime.hpp"

namespace kbcv {

kbc::TerminationBackend backend_for(const std::optional<std::string>& method) {
  if (!method || *method == "lpo") return kbc::OrderKind::Lpo;
  if (*method == "kbo") return kbc::OrderKind::Kbo;
  return kbc::ExternalTool{*method};
}

kbc::CompletionConfig completion_config(const RunConfig& config) {
  kbc::CompletionConfig c;
  c.caching = config.caching;
  c.indexing = config.indexing;
  c.parallel = config.parallel;
  c.timeout = std::chrono::seconds(config.timeout_seconds);
  c.backend = backend_for(config.method);
  return c;
}

int exit_code(kbc::Outcome outcome) {
  switch (outcome) {
    case kbc::Outcome::Success:
      return kSuccess;
    case kbc::Outcome::Fail:
      return kFail;
    case kbc::Outcome::Timeout:
      return kTimeout;
  }
  return kRunError;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw kbc::Error("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::vector<std::string> fingerprint(const kbc::Signature& sig, std::span<const kbc::Rule> rules) {
  std::vector<std::string> out;
  out.reserve(rules.size());
  for (const auto& r : rules) {
    kbc::Term both[] = {r.lhs, r.rhs};
    kbc::Substitution ren = kbc::canonical_renaming(both);
    out.push_back(kbc::to_string(kbc::apply(ren, r.lhs), sig) + " -> " +
                  kbc::to_string(kbc::apply(ren, r.rhs), sig));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<std::pair<kbc::Term, kbc::Term>> as_pairs(std::span<const kbc::Rule> rules) {
  std::vector<std::pair<kbc::Term, kbc::Term>> out;
  for (const auto& r : rules) out.emplace_back(r.lhs, r.rhs);
  return out;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.timeout_seconds <= 0) {
    err << "kbcv: timeout must be positive\n";
    return kInputError;
  }
  kbc::ProblemFile problem;
  try {
    problem = kbc::parse_problem(read_file(config.input));
  } catch (const kbc::ParseError& e) {
    err << config.input.string() << ':' << e.what() << '\n';
    return kInputError;
  } catch (const kbc::Error& e) {
    err << "kbcv: " << e.what() << '\n';
    return kInputError;
  }

  try {
    auto equations = problem.equations();
    kbc::CompletionResult result = kbc::complete(problem.signature, equations, completion_config(config));
    switch (result.outcome) {
      case kbc::Outcome::Success:
        out << "YES\n" << kbc::print_trs(problem.signature, as_pairs(result.rules));
        if (config.proof) kbc::write_proof(out, result.trace, problem.signature, result.outcome);
        break;
      case kbc::Outcome::Fail:
        out << "FAIL\n";
        break;
      case kbc::Outcome::Timeout:
        out << "TIMEOUT\n";
        break;
    }
    return exit_code(result.outcome);
  } catch (const kbc::Error& e) {
    err << "kbcv: " << e.what() << '\n';
    return kRunError;
  }
}

// --- Benchmark grid --------------------------------------------------------

std::string label(const FlagSet& flags) {
  std::string s = "KBCV";
  if (!flags.caching) s += "-b";
  if (!flags.indexing) s += "-i";
  if (!flags.parallel) s += "-u";
  return s;
}

std::vector<FlagSet> grid_columns() {
  return {
      {false, false, false}, {true, false, false}, {false, true, false}, {false, false, true},
      {true, true, false},   {true, false, true},  {false, true, true},  {true, true, true},
  };
}

std::size_t GridReport::completed(std::size_t column) const {
  return std::count_if(rows.begin(), rows.end(),
                       [&](const GridRow& r) { return r.cells[column].verdict == "SUCCESS"; });
}

double GridReport::total_time(std::size_t column) const {
  double total = 0;
  for (const auto& r : rows) {
    if (r.cells[column].verdict == "SUCCESS") total += r.cells[column].seconds;
  }
  return total;
}

double GridReport::average_time(std::size_t column) const {
  std::size_t n = completed(column);
  return n == 0 ? 0.0 : total_time(column) / double(n);
}

bool GridReport::transparent(std::size_t row) const {
  const auto& cells = rows[row].cells;
  if (cells.empty()) return true;
  for (const auto& c : cells) {
    if (c.verdict != cells.front().verdict || c.fingerprint != cells.front().fingerprint) return false;
  }
  return true;
}

namespace {

GridCell run_cell(const kbc::ProblemFile& problem, const FlagSet& flags, const GridOptions& options) {
  GridCell cell;
  RunConfig rc;
  rc.caching = flags.caching;
  rc.indexing = flags.indexing;
  rc.parallel = flags.parallel;
  rc.timeout_seconds = options.timeout_seconds;
  rc.method = options.method;
  const auto start = std::chrono::steady_clock::now();
  try {
    auto equations = problem.equations();
    auto result = kbc::complete(problem.signature, equations, completion_config(rc));
    cell.verdict = std::string(kbc::to_string(result.outcome));
    cell.rules = result.rules.size();
    if (result.outcome == kbc::Outcome::Success) cell.fingerprint = fingerprint(problem.signature, result.rules);
  } catch (const std::exception& e) {
    cell.verdict = "ERROR";
    cell.error = e.what();
  }
  cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cell;
}

}  // namespace

GridReport bench_grid(const std::vector<std::filesystem::path>& inputs, const GridOptions& options) {
  GridReport report;
  report.columns = grid_columns();
  for (const auto& path : inputs) {
    GridRow row;
    row.input = path.string();
    std::optional<kbc::ProblemFile> problem;
    std::string error;
    try {
      problem = kbc::parse_problem(read_file(path));
    } catch (const std::exception& e) {
      error = e.what();
    }
    if (!problem) {
      row.cells.assign(report.columns.size(), GridCell{"ERROR", 0, 0, {}, error});
    } else if (options.concurrent_cells) {
      kbc::TaskPool pool(report.columns.size());
      row.cells = pool.map(report.columns.size(),
                           [&](std::size_t k) { return run_cell(*problem, report.columns[k], options); });
    } else {
      for (const auto& flags : report.columns) row.cells.push_back(run_cell(*problem, flags, options));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

void print_grid(std::ostream& out, const GridReport& report) {
  constexpr int kCol = 12;
  std::size_t width = 14;
  for (const auto& row : report.rows) {
    width = std::max(width, std::filesystem::path(row.input).stem().string().size() + 2);
  }
  const int kName = static_cast<int>(width);
  const auto header = [&] {
    out << std::left << std::setw(kName) << "" << std::right;
    for (const auto& c : report.columns) out << std::setw(kCol) << label(c);
    out << '\n';
  };
  const auto rule = [&] { out << std::string(kName + kCol * report.columns.size(), '-') << '\n'; };
  header();
  rule();
  out << std::fixed << std::setprecision(3);
  out << std::left << std::setw(kName) << "completed" << std::right;
  for (std::size_t k = 0; k < report.columns.size(); ++k) out << std::setw(kCol) << report.completed(k);
  out << '\n' << std::left << std::setw(kName) << "total time" << std::right;
  for (std::size_t k = 0; k < report.columns.size(); ++k) out << std::setw(kCol) << report.total_time(k);
  out << '\n' << std::left << std::setw(kName) << "avg. time" << std::right;
  for (std::size_t k = 0; k < report.columns.size(); ++k) out << std::setw(kCol) << report.average_time(k);
  out << '\n';
  rule();
  for (const auto& row : report.rows) {
    bool all = std::all_of(row.cells.begin(), row.cells.end(),
                           [](const GridCell& c) { return c.verdict == "SUCCESS"; });
    if (all) continue;
    std::string name = std::filesystem::path(row.input).stem().string();
    out << std::left << std::setw(kName) << name << std::right;
    for (const auto& c : row.cells) {
      if (c.verdict == "SUCCESS") {
        out << std::setw(kCol) << c.seconds;
      } else {
        out << std::setw(kCol) << "-";
      }
    }
    out << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

std::string grid_json(const GridReport& report) {
  nlohmann::json j;
  j["columns"] = nlohmann::json::array();
  for (std::size_t k = 0; k < report.columns.size(); ++k) {
    j["columns"].push_back({{"label", label(report.columns[k])},
                            {"caching", report.columns[k].caching},
                            {"indexing", report.columns[k].indexing},
                            {"parallel", report.columns[k].parallel},
                            {"completed", report.completed(k)},
                            {"total_time", report.total_time(k)},
                            {"avg_time", report.average_time(k)}});
  }
  j["runs"] = nlohmann::json::array();
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    const auto& row = report.rows[r];
    nlohmann::json cells = nlohmann::json::array();
    for (std::size_t k = 0; k < row.cells.size(); ++k) {
      const auto& c = row.cells[k];
      nlohmann::json cell = {{"label", label(report.columns[k])},
                             {"verdict", c.verdict},
                             {"seconds", c.seconds},
                             {"rules", c.rules}};
      if (!c.error.empty()) cell["error"] = c.error;
      cells.push_back(std::move(cell));
    }
    j["runs"].push_back({{"input", row.input}, {"transparent", report.transparent(r)}, {"cells", cells}});
  }
  return j.dump(2);
}

}  // namespace kbcv
