#include <cmath>
#include <cstdlib>
#include <numbers>

#include <gtest/gtest.h>

#include "burgers/engine.hpp"
#include "burgers/reference.hpp"

using namespace burgers;
using std::numbers::pi;

namespace {

SpaceTimeGrid coarse_grid() {
  SpaceTimeGrid g;
  for (int i = 0; i <= 20; ++i) g.xs.push_back(0.05 * i);
  g.ts = {0.1, 0.5, 1.0};
  return g;
}

SolutionTable constant_table(double value) {
  SolutionTable t(SpaceTimeGrid::uniform(0.0, 1.0, 0.1, 1.1, 0.1));
  for (double& w : t.w) w = value;
  return t;
}

}  // namespace

TEST(SpaceTimeGrid, UniformConstruction) {
  const auto g = SpaceTimeGrid::uniform(0.0, 1.0, 0.01, 1.0, 0.001);
  EXPECT_EQ(g.nx(), 101u);
  EXPECT_EQ(g.nt(), 1000u);
  EXPECT_EQ(g.xs.back(), 1.0);
  EXPECT_EQ(g.ts.back(), 1.0);
  EXPECT_NO_THROW(g.check(0.0, 1.0, 1.0));
  EXPECT_THROW(SpaceTimeGrid::uniform(0.0, 1.0, 0.0, 1.0, 0.1), DomainError);
}

TEST(SpaceTimeGrid, CheckRejectsBadGrids) {
  SpaceTimeGrid g;
  EXPECT_THROW(g.check(0.0, 1.0, 1.0), DomainError);
  g.xs = {0.0, 0.5, 0.4};
  g.ts = {0.1};
  EXPECT_THROW(g.check(0.0, 1.0, 1.0), DomainError);
  g.xs = {0.0, 1.5};
  EXPECT_THROW(g.check(0.0, 1.0, 1.0), DomainError);
  g.xs = {0.0, 1.0};
  g.ts = {0.5, 2.0};
  EXPECT_THROW(g.check(0.0, 1.0, 1.0), DomainError);
}

TEST(Solve, SineRatioMidpoint) {
  SpaceTimeGrid g;
  g.xs = {0.5};
  g.ts = {0.5};
  const auto table = solve(reference::example1_problem({1.0, 2.0}), g);
  EXPECT_NEAR(table.at(0, 0), pi * std::exp(-pi * pi / 2.0), 1e-9);
  EXPECT_NEAR(table.at(0, 0), 0.0225939679161388, 1e-9);
  EXPECT_EQ(table.status_at(0, 0), CellStatus::ok);
}

TEST(Solve, SineRatioAccuracyAndBoundaries) {
  for (double a_sq : {1.0, 0.1}) {
    const reference::Example1Params prm{a_sq, 2.0};
    const auto table = solve(reference::example1_problem(prm), coarse_grid());
    const auto exact = reference::example1_table(coarse_grid(), prm);
    const auto norms = error_norms(table, exact);
    EXPECT_LE(norms.linf, 1e-5) << a_sq;
    EXPECT_EQ(norms.excluded, 0u);
    for (std::size_t n = 0; n < table.grid.nt(); ++n) {
      EXPECT_LE(std::abs(table.at(n, 0)), 1e-6);
      EXPECT_LE(std::abs(table.at(n, table.grid.nx() - 1)), 1e-6);
    }
    EXPECT_GE(table.meta.timing("field_build"), 0.0);
    EXPECT_GE(table.meta.timing("inversion"), 0.0);
    EXPECT_GE(table.meta.timing("total"), table.meta.timing("inversion"));
  }
}

TEST(Solve, NonzeroDirichletDataReachesBoundaries) {
  BurgersProblem pb;
  pb.a_sq = 0.5;
  pb.alpha1 = 0.4;
  pb.alpha2 = -0.2;
  pb.w0 = InitialProfile::closed_form([](double x) { return 0.4 - 0.6 * x + 0.3 * std::sin(pi * x); });
  const auto table = solve(pb, coarse_grid());
  EXPECT_EQ(table.count(CellStatus::ok), table.w.size());
  for (std::size_t n = 0; n < table.grid.nt(); ++n) {
    EXPECT_NEAR(table.at(n, 0), 0.4, 1e-6);
    EXPECT_NEAR(table.at(n, table.grid.nx() - 1), -0.2, 1e-6);
  }
}

TEST(Solve, ZeroProfileStaysZero) {
  BurgersProblem pb;
  pb.w0 = InitialProfile::closed_form([](double) { return 0.0; });
  const auto table = solve(pb, coarse_grid());
  for (std::size_t k = 0; k < table.w.size(); ++k) {
    EXPECT_EQ(table.w[k], 0.0);
    EXPECT_EQ(table.status[k], CellStatus::ok);
  }
}

TEST(Solve, IndependentOfScaleOfHopfColeData) {
  const auto pb = reference::example2_problem(1.0);
  const auto base = solve(pb, coarse_grid());
  for (double u00 : {5.0, -3.0, 7.0}) {
    EngineOptions opts;
    opts.u00 = u00;
    const auto scaled = solve(pb, coarse_grid(), {}, opts);
    for (std::size_t k = 0; k < base.w.size(); ++k) EXPECT_NEAR(scaled.w[k], base.w[k], 1e-10) << u00;
  }
}

TEST(Solve, DeterministicAcrossRunsAndThreadCounts) {
  const auto pb = reference::example2_problem(0.1);
  EngineOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const auto a = solve(pb, coarse_grid(), {}, one);
  const auto b = solve(pb, coarse_grid(), {}, one);
  const auto c = solve(pb, coarse_grid(), {}, four);
  EXPECT_EQ(a.w, b.w);
  EXPECT_EQ(a.w, c.w);
  EXPECT_EQ(a.status, c.status);
}

TEST(Solve, InitialRowFromProfile) {
  const reference::Example1Params prm{1.0, 2.0};
  SpaceTimeGrid g;
  g.xs = {0.0, 0.5, 1.0};
  g.ts = {0.0, 0.2};
  const auto table = solve(reference::example1_problem(prm), g);
  EXPECT_EQ(table.at(0, 1), reference::example1_exact(0.5, 0.0, prm));
  EXPECT_NEAR(table.at(1, 1), reference::example1_exact(0.5, 0.2, prm), 1e-8);
}

TEST(Solve, RecordsConfigAndSolver) {
  SpaceTimeGrid g;
  g.xs = {0.5};
  g.ts = {0.5};
  ilt::IltConfig cfg;
  cfg.M = 25;
  const auto table = solve(reference::example1_problem({1.0, 2.0}), g, cfg);
  EXPECT_EQ(table.meta.solver, "ilt");
  EXPECT_EQ(table.meta.config["ilt"]["M"], 25);
}

TEST(Solve, ThreadCountFromEnvironment) {
  ::setenv("BURGERS_THREADS", "3", 1);
  EXPECT_EQ(thread_count(), 3u);
  EXPECT_EQ(thread_count(2), 2u);
  ::setenv("BURGERS_THREADS", "junk", 1);
  EXPECT_GE(thread_count(), 1u);
  ::unsetenv("BURGERS_THREADS");
}

TEST(CellStatus, Names) {
  EXPECT_STREQ(to_string(CellStatus::ok), "ok");
  EXPECT_STREQ(to_string(CellStatus::degraded), "degraded");
  EXPECT_STREQ(to_string(CellStatus::denominator_guard), "denominator-guard");
}

TEST(ErrorNorms, IdenticalTablesAreZero) {
  const auto t = constant_table(0.3);
  const auto e = error_norms(t, t);
  EXPECT_EQ(e.l2, 0.0);
  EXPECT_EQ(e.linf, 0.0);
  EXPECT_EQ(e.per_time.size(), t.grid.nt());
}

TEST(ErrorNorms, ConstantOffsetOnUnitGrid) {
  const auto a = constant_table(0.1), b = constant_table(0.0);
  ASSERT_EQ(a.grid.nx(), 11u);
  ASSERT_EQ(a.grid.nt(), 11u);
  const auto e = error_norms(a, b);
  EXPECT_NEAR(e.linf, 0.1, 1e-15);
  EXPECT_NEAR(e.l2, std::sqrt(0.1 * 0.1 * 121 * 0.01), 1e-14);
  for (const auto& row : e.per_time) EXPECT_NEAR(row.linf, 0.1, 1e-15);
}

TEST(ErrorNorms, FlaggedCellsExcluded) {
  auto a = constant_table(0.1);
  const auto b = constant_table(0.0);
  a.w[5] = 100.0;
  a.status[5] = CellStatus::denominator_guard;
  const auto e = error_norms(a, b);
  EXPECT_EQ(e.excluded, 1u);
  EXPECT_NEAR(e.linf, 0.1, 1e-15);
}

TEST(ErrorNorms, GridMismatchThrows) {
  const auto a = constant_table(0.0);
  SolutionTable b(SpaceTimeGrid::uniform(0.0, 1.0, 0.2, 1.1, 0.1));
  EXPECT_THROW(error_norms(a, b), GridMismatch);
  SolutionTable c = a;
  c.grid.xs[3] += 0.01;
  EXPECT_THROW(error_norms(a, c), GridMismatch);
}
