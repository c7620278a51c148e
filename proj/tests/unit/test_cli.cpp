#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "kbcv/app.hpp"
#include "replay.hpp"

using namespace std::chrono_literals;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("kbcv_test_" + name);
  std::ofstream(path) << text;
  return path;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(kbcv::RunConfig config) {
  std::ostringstream out, err;
  int code = kbcv::run(config, out, err);
  return {code, out.str(), err.str()};
}

kbcv::RunConfig config_for(const std::filesystem::path& input) {
  kbcv::RunConfig c;
  c.input = input;
  c.timeout_seconds = 30;
  return c;
}

const char* kDivergent = "(VAR x)\n(RULES f(g(f(x))) == g(f(g(x))))\n";

TEST(Cli, SuccessPrintsRules) {
  auto r = run(config_for(fixtures::data_dir() / "group.trs"));
  EXPECT_EQ(r.code, kbcv::kSuccess);
  EXPECT_EQ(r.out.rfind("YES\n", 0), 0u);
  EXPECT_NE(r.out.find("(RULES"), std::string::npos);
  EXPECT_EQ(r.out.find("<completionProof>"), std::string::npos);
}

TEST(Cli, OutputRulesParseBack) {
  auto r = run(config_for(fixtures::data_dir() / "peano.trs"));
  ASSERT_EQ(r.code, kbcv::kSuccess);
  auto parsed = kbc::parse_problem(r.out.substr(4));
  ASSERT_FALSE(parsed.entries.empty());
  for (const auto& e : parsed.entries) EXPECT_EQ(e.kind, kbc::EntryKind::Rule);
}

TEST(Cli, ProofFlagAppendsReplayableProof) {
  auto c = config_for(fixtures::data_dir() / "group.trs");
  c.proof = true;
  auto r = run(c);
  ASSERT_EQ(r.code, kbcv::kSuccess);
  std::size_t at = r.out.find("<?xml");
  ASSERT_NE(at, std::string::npos);
  auto report = oracle::replay_proof(r.out.substr(at));
  EXPECT_TRUE(report.ok) << (report.errors.empty() ? "" : report.errors.front());
}

TEST(Cli, FailExitCode) {
  auto c = config_for(fixtures::data_dir() / "commutative.trs");
  c.proof = true;
  auto r = run(c);
  EXPECT_EQ(r.code, kbcv::kFail);
  EXPECT_EQ(r.out, "FAIL\n");
}

TEST(Cli, TimeoutExitCode) {
  auto c = config_for(write_temp("divergent.trs", kDivergent));
  c.timeout_seconds = 1;
  auto start = std::chrono::steady_clock::now();
  auto r = run(c);
  EXPECT_EQ(r.code, kbcv::kTimeout);
  EXPECT_EQ(r.out, "TIMEOUT\n");
  EXPECT_LT(std::chrono::steady_clock::now() - start, 5s);
}

TEST(Cli, MissingFileIsInputError) {
  auto r = run(config_for("/nonexistent/problem.trs"));
  EXPECT_EQ(r.code, kbcv::kInputError);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, ParseErrorIsInputError) {
  auto r = run(config_for(write_temp("broken.trs", "(VAR x)\n(RULES f(x -> x)\n")));
  EXPECT_EQ(r.code, kbcv::kInputError);
  EXPECT_NE(r.err.find("broken.trs:"), std::string::npos);
}

TEST(Cli, MethodSelection) {
  EXPECT_TRUE(std::holds_alternative<kbc::OrderKind>(kbcv::backend_for(std::nullopt)));
  EXPECT_EQ(std::get<kbc::OrderKind>(kbcv::backend_for("lpo")), kbc::OrderKind::Lpo);
  EXPECT_EQ(std::get<kbc::OrderKind>(kbcv::backend_for("kbo")), kbc::OrderKind::Kbo);
  EXPECT_TRUE(std::holds_alternative<kbc::ExternalTool>(kbcv::backend_for("ttt2 -s")));

  auto c = config_for(fixtures::data_dir() / "peano.trs");
  c.method = "cat > /dev/null; echo YES";
  EXPECT_EQ(run(c).code, kbcv::kSuccess);
  c.method = "cat > /dev/null; echo NO";
  EXPECT_EQ(run(c).code, kbcv::kFail);
}

TEST(Cli, FlagsMapToConfig) {
  kbcv::RunConfig c;
  c.caching = false;
  c.indexing = false;
  c.parallel = false;
  c.timeout_seconds = 7;
  auto config = kbcv::completion_config(c);
  EXPECT_FALSE(config.caching);
  EXPECT_FALSE(config.indexing);
  EXPECT_FALSE(config.parallel);
  EXPECT_EQ(config.timeout, 7000ms);
}

TEST(Grid, ColumnLabelsInTableOrder) {
  std::vector<std::string> labels;
  for (const auto& f : kbcv::grid_columns()) labels.push_back(kbcv::label(f));
  EXPECT_EQ(labels, (std::vector<std::string>{"KBCV-b-i-u", "KBCV-i-u", "KBCV-b-u", "KBCV-b-i", "KBCV-u",
                                              "KBCV-i", "KBCV-b", "KBCV"}));
}

TEST(Grid, EmptyInputList) {
  auto report = kbcv::bench_grid({}, {});
  EXPECT_EQ(report.columns.size(), 8u);
  EXPECT_TRUE(report.rows.empty());
  for (std::size_t c = 0; c < 8; ++c) {
    EXPECT_EQ(report.completed(c), 0u);
    EXPECT_EQ(report.total_time(c), 0.0);
    EXPECT_EQ(report.average_time(c), 0.0);
  }
  std::ostringstream out;
  kbcv::print_grid(out, report);
  EXPECT_NE(out.str().find("completed"), std::string::npos);
}

TEST(Grid, BundledInputsAreTransparent) {
  kbcv::GridOptions options;
  options.timeout_seconds = 20;
  options.concurrent_cells = true;
  auto inputs = fixtures::bundled_problems();
  inputs.push_back(write_temp("grid_divergent.trs", kDivergent));
  options.timeout_seconds = 2;
  auto report = kbcv::bench_grid(inputs, options);
  ASSERT_EQ(report.rows.size(), inputs.size());
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    EXPECT_TRUE(report.transparent(r)) << report.rows[r].input;
  }
  for (std::size_t c = 0; c < 8; ++c) {
    std::size_t done = 0;
    double total = 0;
    for (const auto& row : report.rows) {
      if (row.cells[c].verdict == "SUCCESS") {
        ++done;
        total += row.cells[c].seconds;
      }
    }
    EXPECT_EQ(report.completed(c), done);
    EXPECT_DOUBLE_EQ(report.total_time(c), total);
    EXPECT_DOUBLE_EQ(report.average_time(c), done ? total / done : 0.0);
  }
  std::ostringstream out;
  kbcv::print_grid(out, report);
  // divergent and commutative are not completed by every configuration
  EXPECT_NE(out.str().find("grid_divergent"), std::string::npos);
  EXPECT_NE(out.str().find("commutative"), std::string::npos);
  EXPECT_EQ(out.str().find("group.trs"), std::string::npos);
  EXPECT_NE(kbcv::grid_json(report).find("\"KBCV-b-i-u\""), std::string::npos);
}

}  // namespace
