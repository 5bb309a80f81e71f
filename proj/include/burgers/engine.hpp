#pragma once

// End-to-end Burgers solver: Hopf-Cole transform of the initial data,
// Laplace-domain field, de Hoog inversion of U and U_x, and the ratio
// w = -2 a^2 L^{-1}{U_x} / L^{-1}{U} over an (x, t) grid.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "burgers/ilt.hpp"
#include "burgers/operational.hpp"
#include "burgers/parallel.hpp"
#include "burgers/problem.hpp"

namespace burgers {

struct SpaceTimeGrid {
  std::vector<double> xs;
  std::vector<double> ts;

  std::size_t nx() const { return xs.size(); }
  std::size_t nt() const { return ts.size(); }

  /// Uniform grid l1, l1+dx, ..., l2 by dt, 2dt, ..., T (t = 0 excluded).
  static SpaceTimeGrid uniform(double l1, double l2, double dx, double T, double dt) {
    if (!(dx > 0.0) || !(dt > 0.0)) throw DomainError("grid steps must be > 0");
    SpaceTimeGrid g;
    const auto nx = static_cast<std::size_t>(std::llround((l2 - l1) / dx));
    for (std::size_t i = 0; i <= nx; ++i) g.xs.push_back(i == nx ? l2 : l1 + dx * static_cast<double>(i));
    const auto nt = static_cast<std::size_t>(std::llround(T / dt));
    for (std::size_t n = 1; n <= nt; ++n) g.ts.push_back(n == nt ? T : dt * static_cast<double>(n));
    return g;
  }

  void check(double l1, double l2, double T) const {
    if (xs.empty() || ts.empty()) throw DomainError("grid must be non-empty");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] < l1 || xs[i] > l2) throw DomainError("grid abscissa outside [l1, l2]");
      if (i > 0 && !(xs[i] > xs[i - 1])) throw DomainError("grid abscissae must be strictly increasing");
    }
    for (std::size_t n = 0; n < ts.size(); ++n) {
      if (ts[n] < 0.0 || ts[n] > T * (1.0 + 1e-12)) throw DomainError("grid time outside [0, T]");
      if (n > 0 && !(ts[n] > ts[n - 1])) throw DomainError("grid times must be strictly increasing");
    }
  }

  bool operator==(const SpaceTimeGrid&) const = default;
};

enum class CellStatus { ok, degraded, denominator_guard };

inline const char* to_string(CellStatus s) {
  switch (s) {
    case CellStatus::ok: return "ok";
    case CellStatus::degraded: return "degraded";
    case CellStatus::denominator_guard: return "denominator-guard";
  }
  return "?";
}

struct TableMeta {
  std::string solver;
  nlohmann::json config = nlohmann::json::object();
  /// Wall time per stage in seconds, in insertion order.
  std::vector<std::pair<std::string, double>> timings;
  std::vector<std::string> warnings;

  double timing(const std::string& stage) const {
    for (const auto& [name, secs] : timings)
      if (name == stage) return secs;
    return 0.0;
  }
};

/// w(x,t) on a grid, stored t-major: w[n * nx + i] is (xs[i], ts[n]).
struct SolutionTable {
  SpaceTimeGrid grid;
  std::vector<double> w;
  std::vector<CellStatus> status;
  TableMeta meta;

  SolutionTable() = default;
  explicit SolutionTable(SpaceTimeGrid g)
      : grid(std::move(g)), w(grid.nx() * grid.nt(), 0.0), status(grid.nx() * grid.nt(), CellStatus::ok) {}

  double& at(std::size_t n, std::size_t i) { return w[n * grid.nx() + i]; }
  double at(std::size_t n, std::size_t i) const { return w[n * grid.nx() + i]; }
  CellStatus& status_at(std::size_t n, std::size_t i) { return status[n * grid.nx() + i]; }
  CellStatus status_at(std::size_t n, std::size_t i) const { return status[n * grid.nx() + i]; }

  std::size_t count(CellStatus s) const {
    return static_cast<std::size_t>(std::count(status.begin(), status.end(), s));
  }
};

struct EngineOptions {
  double u00 = 1.0;
  quad::QuadratureSpec quadrature{};
  /// 0 selects BURGERS_THREADS or the hardware concurrency.
  unsigned threads = 0;
};

namespace detail {

using Clock = std::chrono::steady_clock;
inline double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace detail

inline nlohmann::json to_json(const ilt::IltConfig& cfg) {
  return {{"tol", cfg.tol}, {"M", cfg.M}, {"scale_factor", cfg.scale_factor}, {"gamma_shift", cfg.gamma_shift}};
}

/// Inverse-Laplace Burgers solution on `grid`. Cells where the inversion
/// degrades or the denominator guard trips are flagged, not fatal.
inline SolutionTable solve(const BurgersProblem& problem, const SpaceTimeGrid& grid, const ilt::IltConfig& cfg = {},
                           const EngineOptions& opts = {}) {
  const auto total_start = detail::Clock::now();
  cfg.check();
  const ValidatedProblem valid = validate(problem);
  const BurgersProblem& pb = valid.problem;
  grid.check(pb.l1, pb.l2, pb.T);
  const unsigned threads = thread_count(opts.threads);

  SolutionTable table(grid);
  table.meta.solver = "ilt";
  table.meta.config = {{"ilt", to_json(cfg)}, {"u00", opts.u00}, {"threads", threads}};
  table.meta.warnings = valid.warnings;

  auto stage_start = detail::Clock::now();
  const HopfColeInitial phi(pb, opts.u00);
  for (const auto& w : phi.warnings()) table.meta.warnings.push_back(w);
  const LaplaceField field(heat_problem(pb, phi), opts.quadrature);
  double field_time = detail::seconds_since(stage_start);
  double inversion_time = 0.0;

  const std::size_t nx = grid.nx();
  std::vector<double> positive_times;
  std::vector<std::size_t> positive_rows;
  for (std::size_t n = 0; n < grid.nt(); ++n) {
    if (grid.ts[n] > 0.0) {
      positive_times.push_back(grid.ts[n]);
      positive_rows.push_back(n);
    } else {
      for (std::size_t i = 0; i < nx; ++i) table.at(n, i) = pb.w0(grid.xs[i]);
    }
  }

  // u and u_x for every cell, filled group by group.
  std::vector<double> u(table.w.size(), 0.0), ux(table.w.size(), 0.0);
  std::vector<char> degraded(table.w.size(), 0);
  std::size_t fallbacks = 0;

  for (const auto& group : ilt::octave_groups(positive_times)) {
    double t_max = 0.0;
    for (std::size_t g : group) t_max = std::max(t_max, positive_times[g]);
    const ilt::Contour contour(t_max, cfg);
    const auto nodes = contour.nodes();

    stage_start = detail::Clock::now();
    double k_max = 0.0;
    for (const cplx& p : nodes) k_max = std::max(k_max, std::abs(field.kernel().root(p)) / field.kernel().a);
    const RowPlan plan = field.plan_row(grid.xs, k_max);
    std::vector<RowValues> rows(nodes.size());
    parallel_for(nodes.size(), threads, [&](std::size_t k) { rows[k] = field.eval_row(plan, nodes[k]); });
    bool rows_converged = true;
    for (const auto& r : rows) {
      rows_converged = rows_converged && r.converged;
      fallbacks += r.fallbacks;
    }
    field_time += detail::seconds_since(stage_start);

    stage_start = detail::Clock::now();
    parallel_for(nx, threads, [&](std::size_t i) {
      std::vector<cplx> su(nodes.size()), sux(nodes.size());
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        su[k] = rows[k].U[i];
        sux[k] = rows[k].Ux[i];
      }
      // Samples below the quadrature accuracy of U carry no signal.
      double peak_u = 0.0;
      for (const cplx& v : su) peak_u = std::max(peak_u, std::abs(v));
      const double floor = opts.quadrature.abs_tol + opts.quadrature.rel_tol * peak_u;
      const ilt::AcceleratedSeries series_u(contour, su);
      const ilt::AcceleratedSeries series_ux(contour, sux, floor);
      for (std::size_t g : group) {
        const std::size_t cell = positive_rows[g] * nx + i;
        ilt::PointStatus s1, s2;
        u[cell] = series_u(positive_times[g], &s1);
        ux[cell] = series_ux(positive_times[g], &s2);
        degraded[cell] = !rows_converged || s1 != ilt::PointStatus::ok || s2 != ilt::PointStatus::ok;
      }
    });
    inversion_time += detail::seconds_since(stage_start);
  }

  // Ratio with a guard relative to the largest |u| of each time row.
  double boundary_dev = 0.0;
  for (std::size_t n : positive_rows) {
    double scale = 0.0;
    for (std::size_t i = 0; i < nx; ++i)
      if (std::isfinite(u[n * nx + i])) scale = std::max(scale, std::abs(u[n * nx + i]));
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t cell = n * nx + i;
      try {
        table.w[cell] = hopf_cole_ratio(u[cell], ux[cell], pb.a_sq, scale);
        table.status[cell] = degraded[cell] || !std::isfinite(table.w[cell]) ? CellStatus::degraded : CellStatus::ok;
      } catch (const DegenerateDenominator&) {
        table.w[cell] = std::numeric_limits<double>::quiet_NaN();
        table.status[cell] = CellStatus::denominator_guard;
      }
    }
    if (grid.xs.front() == pb.l1 && table.status[n * nx] == CellStatus::ok)
      boundary_dev = std::max(boundary_dev, std::abs(table.at(n, 0) - pb.alpha1));
    if (grid.xs.back() == pb.l2 && table.status[n * nx + nx - 1] == CellStatus::ok)
      boundary_dev = std::max(boundary_dev, std::abs(table.at(n, nx - 1) - pb.alpha2));
  }
  if (boundary_dev > 1e-6)
    table.meta.warnings.push_back("boundary columns deviate from alpha by " + std::to_string(boundary_dev));

  table.meta.config["boundary_deviation"] = boundary_dev;
  table.meta.config["quadrature_fallbacks"] = fallbacks;
  table.meta.timings = {{"field_build", field_time},
                        {"inversion", inversion_time},
                        {"total", detail::seconds_since(total_start)}};
  return table;
}

struct TimeSliceNorm {
  double t = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

struct ErrorNorms {
  double l2 = 0.0;
  double linf = 0.0;
  std::vector<TimeSliceNorm> per_time;
  /// Cells skipped because either table flagged them.
  std::size_t excluded = 0;
};

/// Discrete L2 (sqrt(dx dt sum d^2)) and max-abs differences; flagged cells
/// are excluded and counted.
inline ErrorNorms error_norms(const SolutionTable& candidate, const SolutionTable& reference) {
  const auto& g = candidate.grid;
  if (g.xs.size() != reference.grid.xs.size() || g.ts.size() != reference.grid.ts.size())
    throw GridMismatch("error_norms: grids differ in shape");
  auto close = [](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::abs(a[i] - b[i]) > 1e-12 * std::max(1.0, std::abs(a[i]))) return false;
    return true;
  };
  if (!close(g.xs, reference.grid.xs) || !close(g.ts, reference.grid.ts))
    throw GridMismatch("error_norms: grid coordinates differ");

  const std::size_t nx = g.nx(), nt = g.nt();
  const double dx = nx > 1 ? (g.xs.back() - g.xs.front()) / static_cast<double>(nx - 1) : 1.0;
  const double dt = nt > 1 ? (g.ts.back() - g.ts.front()) / static_cast<double>(nt - 1) : 1.0;

  ErrorNorms out;
  double sum = 0.0;
  for (std::size_t n = 0; n < nt; ++n) {
    TimeSliceNorm row{g.ts[n], 0.0, 0.0};
    double row_sum = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      if (candidate.status_at(n, i) != CellStatus::ok || reference.status_at(n, i) != CellStatus::ok) {
        ++out.excluded;
        continue;
      }
      const double d = candidate.at(n, i) - reference.at(n, i);
      row_sum += d * d;
      row.linf = std::max(row.linf, std::abs(d));
    }
    row.l2 = std::sqrt(dx * row_sum);
    sum += row_sum;
    out.linf = std::max(out.linf, row.linf);
    out.per_time.push_back(row);
  }
  out.l2 = std::sqrt(dx * dt * sum);
  return out;
}

}  // namespace burgers
