#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "burgers/cli/config.hpp"
#include "burgers/cli/run.hpp"

namespace {

int report_error(const std::exception& e) {
  std::cerr << "error: " << e.what() << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operational Burgers solver"};
  app.require_subcommand(1);

  std::string solve_config, output_dir;
  auto* solve_cmd = app.add_subcommand("solve", "Run the selected solvers and write tables plus report.json");
  solve_cmd->add_option("--config", solve_config, "Run configuration (JSON)")->required();
  solve_cmd->add_option("--output-dir", output_dir, "Directory for outputs (overrides output.path)");

  std::string validate_config;
  auto* validate_cmd = app.add_subcommand("validate", "Check a configuration without running");
  validate_cmd->add_option("--config", validate_config, "Run configuration (JSON)")->required();

  std::string bench_config;
  int repeats = 3;
  auto* bench_cmd = app.add_subcommand("bench", "Run the selected solvers repeatedly; report min time per stage");
  bench_cmd->add_option("--config", bench_config, "Run configuration (JSON)")->required();
  bench_cmd->add_option("--repeats", repeats, "Number of runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    using namespace burgers::cli;
    if (*solve_cmd) {
      const RunConfig cfg = load_config(solve_config);
      const std::filesystem::path dir = output_dir.empty() ? cfg.output.path : std::filesystem::path(output_dir);
      const RunOutcome outcome = run(cfg, dir);
      for (const auto& f : outcome.files) std::cout << f.string() << '\n';
      if (outcome.exit_code == 2)
        std::cerr << "warning: " << outcome.report.total_degraded() << " degraded cell(s)\n";
      return outcome.exit_code;
    }
    if (*validate_cmd) {
      const RunConfig cfg = load_config(validate_config);
      const auto pb = burgers::validate(cfg.burgers_problem());
      cfg.space_time_grid().check(pb.problem.l1, pb.problem.l2, pb.problem.T);
      for (const auto& w : pb.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << "ok\n";
      return 0;
    }
    if (*bench_cmd) {
      const RunConfig cfg = load_config(bench_config);
      const auto report = bench(cfg, repeats);
      std::cout << report.dump(2) << '\n';
      std::size_t degraded = 0;
      for (const auto& entry : report.at("degraded_cells").items()) degraded += entry.value().get<std::size_t>();
      return degraded > 0 ? 2 : 0;
    }
  } catch (const std::exception& e) {
    return report_error(e);
  }
  return 1;
}
