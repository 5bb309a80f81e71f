#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "burgers/cli/config.hpp"
#include "burgers/cli/output.hpp"
#include "burgers/engine.hpp"
#include "burgers/reference.hpp"

namespace burgers::cli {

inline SolutionTable run_solver(const RunConfig& cfg, Solver solver, const BurgersProblem& pb,
                                const SpaceTimeGrid& grid) {
  switch (solver) {
    case Solver::ilt: {
      EngineOptions opts;
      opts.u00 = cfg.problem.u00;
      return solve(pb, grid, cfg.ilt, opts);
    }
    case Solver::fd: return reference::fd_solve(pb, cfg.fd, &grid);
    case Solver::exact1: {
      const auto start = burgers::detail::Clock::now();
      auto table = reference::example1_table(grid, {cfg.problem.a_sq, cfg.problem.sigma});
      table.meta.timings = {{"total", burgers::detail::seconds_since(start)}};
      return table;
    }
    case Solver::cole: return reference::cole_table(grid, {cfg.problem.a_sq, cfg.cole_terms});
  }
  throw std::logic_error("unknown solver");
}

struct RunReport {
  /// Per solver: stage -> seconds.
  std::map<std::string, std::map<std::string, double>> timings;
  /// norms[a][b] for every ordered pair of distinct solvers.
  std::map<std::string, std::map<std::string, ErrorNorms>> norms;
  std::map<std::string, std::size_t> degraded;
  std::map<std::string, std::vector<std::string>> warnings;

  std::size_t total_degraded() const {
    std::size_t n = 0;
    for (const auto& [_, c] : degraded) n += c;
    return n;
  }

  json to_json() const {
    json out;
    out["timings"] = timings;
    json nj = json::object();
    for (const auto& [a, row] : norms)
      for (const auto& [b, e] : row) {
        json per_time = json::array();
        for (const auto& s : e.per_time) per_time.push_back({{"t", s.t}, {"l2", s.l2}, {"linf", s.linf}});
        nj[a][b] = {{"l2", e.l2}, {"linf", e.linf}, {"excluded", e.excluded}, {"per_time", per_time}};
      }
    out["norms"] = nj;
    out["degraded_cells"] = degraded;
    out["warnings"] = warnings;
    return out;
  }
};

inline RunReport make_report(const std::vector<SolutionTable>& tables) {
  RunReport rep;
  for (const auto& t : tables) {
    auto& stages = rep.timings[t.meta.solver];
    for (const auto& [stage, secs] : t.meta.timings) stages[stage] = secs;
    rep.degraded[t.meta.solver] = t.w.size() - t.count(CellStatus::ok);
    rep.warnings[t.meta.solver] = t.meta.warnings;
  }
  for (std::size_t a = 0; a < tables.size(); ++a)
    for (std::size_t b = a + 1; b < tables.size(); ++b) {
      const ErrorNorms e = error_norms(tables[a], tables[b]);
      rep.norms[tables[a].meta.solver][tables[b].meta.solver] = e;
      rep.norms[tables[b].meta.solver][tables[a].meta.solver] = e;
    }
  return rep;
}

inline std::vector<SolutionTable> run_all(const RunConfig& cfg) {
  const BurgersProblem pb = cfg.burgers_problem();
  const SpaceTimeGrid grid = cfg.space_time_grid();
  std::vector<SolutionTable> tables;
  for (Solver s : cfg.solvers) tables.push_back(run_solver(cfg, s, pb, grid));
  return tables;
}

struct RunOutcome {
  int exit_code = 0;
  std::vector<std::filesystem::path> files;
  RunReport report;
};

/// Runs every selected solver and writes one table per solver plus
/// report.json into the output directory.
inline RunOutcome run(const RunConfig& cfg, const std::filesystem::path& output_dir) {
  RunOutcome outcome;
  const auto tables = run_all(cfg);
  outcome.report = make_report(tables);
  std::filesystem::create_directories(output_dir);
  const char* ext = cfg.output.format == Format::csv ? ".csv" : ".json";
  for (const auto& t : tables) {
    const auto path = output_dir / (t.meta.solver + ext);
    emit_table(t, cfg.output.format, path, cfg.echo);
    outcome.files.push_back(path);
  }
  json report = outcome.report.to_json();
  report["config"] = cfg.echo;
  const auto report_path = output_dir / "report.json";
  std::ofstream out(report_path);
  if (!out) throw std::runtime_error("cannot open " + report_path.string() + " for writing");
  out << report.dump(2) << '\n';
  outcome.files.push_back(report_path);
  outcome.exit_code = outcome.report.total_degraded() > 0 ? 2 : 0;
  return outcome;
}

/// Runs the selected solvers `repeats` times and keeps the minimum wall
/// time of every stage.
inline json bench(const RunConfig& cfg, int repeats = 3) {
  std::map<std::string, std::map<std::string, double>> best;
  RunReport last;
  for (int r = 0; r < repeats; ++r) {
    last = make_report(run_all(cfg));
    for (const auto& [solver, stages] : last.timings)
      for (const auto& [stage, secs] : stages) {
        auto [it, inserted] = best[solver].emplace(stage, secs);
        if (!inserted) it->second = std::min(it->second, secs);
      }
  }
  json out;
  out["repeats"] = repeats;
  out["min_seconds"] = best;
  json norms = json::object();
  for (const auto& [a, row] : last.norms)
    for (const auto& [b, e] : row) norms[a][b] = {{"l2", e.l2}, {"linf", e.linf}};
  out["norms"] = norms;
  out["degraded_cells"] = last.degraded;
  return out;
}

}  // namespace burgers::cli
