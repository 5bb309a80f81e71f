// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "burgers/burgers.hpp"
#include "burgers/cli/config.hpp"
#include "burgers/cli/run.hpp"

using namespace burgers;
using std::numbers::pi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SpaceTimeGrid grid_05(std::vector<double> ts) {
  SpaceTimeGrid g;
  for (int i = 0; i <= 20; ++i) g.xs.push_back(0.05 * i);
  g.ts = std::move(ts);
  return g;
}

LaplaceField heat_field(const BurgersProblem& pb, quad::QuadratureSpec spec = {}, double u00 = 1.0) {
  return LaplaceField(heat_problem(pb, HopfColeInitial(pb, u00)), spec);
}

std::vector<cplx> contour_nodes(const std::vector<double>& ts, const ilt::IltConfig& cfg = {}) {
  std::vector<cplx> out;
  for (const auto& group : ilt::octave_groups(ts)) {
    double t_max = 0.0;
    for (std::size_t i : group) t_max = std::max(t_max, ts[i]);
    const ilt::Contour c(t_max, cfg);
    out.insert(out.end(), c.nodes().begin(), c.nodes().end());
  }
  return out;
}

void criterion1() {
  double worst = 0.0, slowest = 0.0;
  bool ok = true;
  for (double a_sq : {1.0, 0.1}) {
    const reference::Example1Params prm{a_sq, 2.0};
    const auto grid = grid_05({0.1, 0.5, 1.0});
    const auto start = Clock::now();
    const auto table = solve(reference::example1_problem(prm), grid);
    const double secs = seconds(start);
    const auto e = error_norms(table, reference::example1_table(grid, prm));
    ok = ok && e.linf <= 1e-5 && e.excluded == 0 && secs < 10.0;
    worst = std::max(worst, e.linf);
    slowest = std::max(slowest, secs);
  }
  report(1, ok, fmt("sine-ratio problem, a^2 in {1, 0.1}: max|w_ilt - w_exact| = %.3e (<= 1e-5), slowest %.3f s", worst,
                    slowest));
}

void criterion2() {
  const reference::Example1Params prm{1.0, 2.0};
  const auto field = heat_field(reference::example1_problem(prm), {1e-14, 1e-13, 40});
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> ux(0.01, 0.99), ure(0.5, 10.0), uim(-20.0, 20.0);
  double worst_u = 0.0, worst_ux = 0.0;
  for (int i = 0; i < 25; ++i) {
    const double x = ux(rng);
    const cplx p(ure(rng), uim(rng));
    const auto v = field.eval(x, p);
    const auto [U, Ux] = reference::example1_laplace(x, p, prm);
    worst_u = std::max(worst_u, std::abs(v.U - U) / std::abs(U));
    worst_ux = std::max(worst_ux, std::abs(v.Ux - Ux) / std::abs(Ux));
  }
  report(2, worst_u <= 1e-8 && worst_ux <= 1e-8,
         fmt("build_field vs closed-form U, U_x at 25 random (x,p): max rel err %.3e, %.3e (<= 1e-8)",
             worst_u, worst_ux));
}

void criterion3() {
  const reference::Example1Params prm{1.0, 2.0};
  const auto pb = reference::example1_problem(prm);
  const auto rd = heat_problem(pb, HopfColeInitial(pb));
  const Kernel k = kernel_of(rd);
  const quad::QuadratureSpec tight{1e-15, 1e-14, 40};
  double worst = 0.0, worst_flux = 0.0;
  for (double p : {0.5, 1.0, 1.7, 2.5, 4.0, 6.3, 10.0, 25.0, 60.0, 150.0}) {
    const cplx R1 = r_transform(0.0, p, rd.phi, nullptr, k, 0.0, 1.0, tight).value;
    const cplx R2 = r_transform(1.0, p, rd.phi, nullptr, k, 0.0, 1.0, tight).value;
    const auto c = solve_boundary_system(p, rd, R1, R2, 0.0, 0.0);
    const auto v = reference::example1_boundary_vector(p, prm);
    worst = std::max({worst, std::abs(c.U_l1 - v[0]) / std::abs(v[0]), std::abs(c.U_l2 - v[2]) / std::abs(v[2])});
    worst_flux = std::max({worst_flux, std::abs(c.Ux_l1) / std::abs(v[0]), std::abs(c.Ux_l2) / std::abs(v[2])});
  }
  report(3, worst <= 1e-10 && worst_flux <= 1e-10,
         fmt("boundary vector at 10 real p: max rel err %.3e (<= 1e-10), max |Ux_l|/|U_l| %.3e", worst, worst_flux));
}

void criterion4() {
  struct Case {
    double a_sq;
    int terms;
    std::vector<double> ts;
  };
  double worst = 0.0;
  std::size_t excluded = 0;
  for (const Case& c : {Case{1.0, 20, {0.1, 0.5, 1.0}}, Case{0.1, 30, {0.5, 1.0}}}) {
    const auto grid = grid_05(c.ts);
    const auto table = solve(reference::example2_problem(c.a_sq), grid);
    const auto e = error_norms(table, reference::cole_table(grid, {c.a_sq, c.terms}));
    worst = std::max(worst, e.linf);
    excluded += e.excluded;
  }
  report(4, worst <= 1e-4 && excluded == 0,
         fmt("sine profile vs Cole series (a^2=1: 20 terms, a^2=0.1: 30 terms): max err %.3e (<= 1e-4)", worst));
}

void criterion5() {
  struct Case {
    BurgersProblem pb;
    std::vector<double> ts;
  };
  const std::vector<Case> cases = {
      {reference::example1_problem({1.0, 2.0}), {0.1, 0.5, 1.0}},
      {reference::example1_problem({0.1, 2.0}), {0.1, 0.5, 1.0}},
      {reference::example2_problem(1.0), {0.1, 0.5, 1.0}},
      {reference::example2_problem(0.1), {0.5, 1.0}},
  };
  double worst_res = 0.0, worst_ratio = 0.0;
  std::size_t nodes = 0;
  for (const auto& c : cases) {
    const auto field = heat_field(c.pb);
    for (const cplx& p : contour_nodes(c.ts)) {
      ++nodes;
      const auto [r1, r2] = boundary_residuals(field, p);
      const auto left = field.eval(c.pb.l1, p), right = field.eval(c.pb.l2, p);
      const double scale = std::max(std::abs(left.U), std::abs(right.U));
      worst_res = std::max(worst_res, std::max(std::abs(r1), std::abs(r2)) / scale);
      const double guard = kDenominatorGuard * scale;
      if (std::abs(left.U) > guard)
        worst_ratio = std::max(worst_ratio, std::abs(left.Ux / left.U + c.pb.alpha1 / (2 * c.pb.a_sq)));
      if (std::abs(right.U) > guard)
        worst_ratio = std::max(worst_ratio, std::abs(right.Ux / right.U + c.pb.alpha2 / (2 * c.pb.a_sq)));
    }
  }
  report(5, worst_res <= 1e-8 && worst_ratio <= 1e-8,
         fmt("Robin residuals at %.0f contour nodes: max rel %.3e (<= 1e-8); ratio identities max dev %.3e", nodes,
             worst_res, worst_ratio));
}

void criterion6() {
  struct Pair {
    std::function<cplx(cplx)> F;
    std::function<double(double)> f;
  };
  const std::vector<Pair> pairs = {
      {[](cplx p) { return 1.0 / p; }, [](double) { return 1.0; }},
      {[](cplx p) { return 1.0 / (p * p); }, [](double t) { return t; }},
      {[](cplx p) { return 1.0 / (p + 1.0); }, [](double t) { return std::exp(-t); }},
      {[](cplx p) { return 1.0 / std::sqrt(p); }, [](double t) { return 1.0 / std::sqrt(pi * t); }},
      {[](cplx p) { return 1.0 / (p * p + 1.0); }, [](double t) { return std::sin(t); }},
      {[](cplx p) { return p / (p * p + 1.0); }, [](double t) { return std::cos(t); }},
  };
  const std::vector<double> ts = {0.1, 0.5, 1.0, 2.0, 5.0};
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t degraded = 0;
  for (const auto& pair : pairs) {
    const auto r = ilt::invert_batched(pair.F, ts);
    degraded += r.degraded();
    for (std::size_t i = 0; i < ts.size(); ++i) worst = std::max(worst, std::abs(r.values[i] - pair.f(ts[i])));
  }
  const double secs = seconds(start);
  report(6, worst <= 1e-7 && degraded == 0 && secs < 1.0,
         fmt("six known pairs on t in {0.1,0.5,1,2,5}: max abs err %.3e (<= 1e-7) in %.4f s", worst, secs));
}

void criterion7() {
  const reference::Example1Params prm{1.0, 2.0};
  SpaceTimeGrid g;
  for (int i = 0; i <= 10; ++i) g.xs.push_back(0.1 * i);
  g.ts = {0.5};
  const auto exact = reference::example1_table(g, prm);
  const auto pb = reference::example1_problem(prm, 0.5);
  auto err = [&](double dx, double dt) { return error_norms(reference::fd_solve(pb, {dx, dt}, &g), exact).linf; };
  const double coarse = err(0.02, 0.0004), fine = err(0.01, 0.0001), paper_mesh = err(0.01, 0.001);
  const double ratio = coarse / fine;
  report(7, ratio >= 3.5 && paper_mesh > 0.0,
         fmt("FD at t=0.5: err(dx=0.02)=%.3e, err(dx=0.01)=%.3e, ratio %.2f (>= 3.5); dx=0.01,dt=0.001 err %.3e",
             coarse, fine, ratio, paper_mesh));
}

void criterion8() {
  double worst = 0.0;
  const std::vector<std::pair<BurgersProblem, std::vector<double>>> cases = {
      {reference::example1_problem({1.0, 2.0}), {0.1, 0.5, 1.0}},
      {reference::example2_problem(0.1), {0.5, 1.0}},
  };
  for (const auto& [pb, ts] : cases) {
    const auto grid = grid_05(ts);
    const auto base = solve(pb, grid);
    for (double u00 : {5.0, -3.0}) {
      EngineOptions opts;
      opts.u00 = u00;
      const auto other = solve(pb, grid, {}, opts);
      for (std::size_t k = 0; k < base.w.size(); ++k) worst = std::max(worst, std::abs(other.w[k] - base.w[k]));
    }
  }
  report(8, worst <= 1e-10, fmt("u00 in {1, 5, -3}: max cellwise difference %.3e (<= 1e-10)", worst));
}

void criterion9() {
  const auto doc = cli::json::parse(R"({
    "problem": {"preset": "example2", "a_sq": 1.0},
    "grid": {"dx": 0.05, "ts": [0.1, 0.5, 1.0]},
    "solvers": ["ilt", "cole", "fd"],
    "cole": {"n_terms": 20},
    "fd": {"dx": 0.01, "dt": 0.001}
  })");
  const auto cfg = cli::parse_config(doc);
  const auto first = cli::bench(cfg, 3);
  const auto second = cli::bench(cfg, 3);
  bool structured = true;
  for (const char* solver : {"ilt", "cole", "fd"}) {
    structured = structured && first["min_seconds"].contains(solver);
    for (const auto& stage : first["min_seconds"][solver].items())
      structured = structured && second["min_seconds"][solver].contains(stage.key());
    structured = structured && first["min_seconds"][solver].size() == second["min_seconds"][solver].size();
  }
  structured = structured && first["min_seconds"]["ilt"].contains("field_build") &&
               first["min_seconds"]["ilt"].contains("inversion");
  const double ilt = first["min_seconds"]["ilt"]["total"].get<double>();
  const double fd = first["min_seconds"]["fd"]["total"].get<double>();
  const double cole = first["min_seconds"]["cole"]["total"].get<double>();
  const double accuracy = first["norms"]["ilt"]["cole"]["linf"].get<double>();
  report(9, structured && accuracy <= 1e-4 && ilt <= 2.0 * fd,
         fmt("bench min times: ilt %.2e s (err vs cole %.1e), fd %.2e s, cole %.2e s; ilt/fd = %.2f (<= 2)", ilt,
             accuracy, fd, cole, ilt / fd));
}

void criterion10() {
  const auto field = heat_field(reference::example2_problem(1.0), {1e-14, 1e-13, 40});
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> ux(0.0, 1.0), ure(0.5, 10.0), uim(-20.0, 20.0);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double x = ux(rng);
    const cplx p(ure(rng), uim(rng));
    const auto [U, Ux] = reference::example2_pdomain(x, p, 1.0);
    const auto v = field.eval(x, p);
    worst = std::max({worst, std::abs(U - v.U) / std::abs(v.U), std::abs(Ux - v.Ux) / std::abs(v.U)});
  }
  report(10, worst <= 1e-8, fmt("semi-analytic vs generic field at 10 random (x,p): max rel diff %.3e (<= 1e-8)", worst));
}

}  // namespace

int main() {
  const std::vector<void (*)()> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                            criterion6, criterion7, criterion8, criterion9, criterion10};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
