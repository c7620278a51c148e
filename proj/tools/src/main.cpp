#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "kbcv/app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kbcv: Knuth-Bendix completion"};
  app.require_subcommand(0, 1);

  kbcv::RunConfig config;
  bool no_caching = false;
  bool no_indexing = false;
  bool no_parallel = false;
  std::string method;
  app.add_flag("-a,--auto", config.automatic, "automatic mode (the only mode)");
  app.add_flag("-p,--proof", config.proof, "print the proof trace after the completed system");
  app.add_option("-s,--timeout", config.timeout_seconds, "time budget in seconds")
      ->check(CLI::PositiveNumber);
  app.add_option("-m,--method", method, "lpo, kbo, or an external termination command");
  app.add_flag("-b,--no-caching", no_caching, "disable caching");
  app.add_flag("-i,--no-indexing", no_indexing, "disable term indexing");
  app.add_flag("-u,--no-parallel", no_parallel, "disable parallel phases");
  app.add_option("input", config.input, "problem file (TPDB format)");

  auto* grid = app.add_subcommand("grid", "run inputs under all eight flag combinations");
  std::vector<std::filesystem::path> inputs;
  std::string json_path;
  kbcv::GridOptions grid_options;
  grid->add_option("inputs", inputs, "problem files");
  grid->add_option("-s,--timeout", grid_options.timeout_seconds, "time budget per run in seconds")
      ->check(CLI::PositiveNumber);
  grid->add_option("-m,--method", method, "lpo, kbo, or an external termination command");
  grid->add_option("--json", json_path, "write a JSON report here");
  grid->add_flag("--concurrent", grid_options.concurrent_cells, "run cells concurrently (smoke tests)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kbcv::kInputError;
  }
  if (!method.empty()) {
    config.method = method;
    grid_options.method = method;
  }

  if (grid->parsed()) {
    try {
      auto report = kbcv::bench_grid(inputs, grid_options);
      kbcv::print_grid(std::cout, report);
      if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) {
          std::cerr << "kbcv: cannot write " << json_path << '\n';
          return kbcv::kInputError;
        }
        out << kbcv::grid_json(report) << '\n';
      }
    } catch (const std::exception& e) {
      std::cerr << "kbcv: " << e.what() << '\n';
      return kbcv::kRunError;
    }
    return 0;
  }

  if (config.input.empty()) {
    std::cerr << "kbcv: no input file\n" << app.help();
    return kbcv::kInputError;
  }
  config.caching = !no_caching;
  config.indexing = !no_indexing;
  config.parallel = !no_parallel;
  return kbcv::run(config, std::cout, std::cerr);
}
