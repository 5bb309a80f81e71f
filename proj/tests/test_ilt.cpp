#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "burgers/ilt.hpp"
#include "burgers/reference.hpp"

using namespace burgers;
using namespace burgers::ilt;
using std::numbers::pi;

namespace {

struct Pair {
  const char* name;
  std::function<cplx(cplx)> F;
  std::function<double(double)> f;
};

std::vector<Pair> known_pairs() {
  return {
      {"1/p", [](cplx p) { return 1.0 / p; }, [](double) { return 1.0; }},
      {"1/p^2", [](cplx p) { return 1.0 / (p * p); }, [](double t) { return t; }},
      {"1/(p+1)", [](cplx p) { return 1.0 / (p + 1.0); }, [](double t) { return std::exp(-t); }},
      {"1/sqrt(p)", [](cplx p) { return 1.0 / std::sqrt(p); }, [](double t) { return 1.0 / std::sqrt(pi * t); }},
      {"1/(p^2+1)", [](cplx p) { return 1.0 / (p * p + 1.0); }, [](double t) { return std::sin(t); }},
      {"p/(p^2+1)", [](cplx p) { return p / (p * p + 1.0); }, [](double t) { return std::cos(t); }},
  };
}

const std::vector<double> kTimes = {0.1, 0.5, 1.0, 2.0, 5.0};

ReactionDiffusionProblem example1_heat() {
  const auto pb = reference::example1_problem({1.0, 2.0});
  return heat_problem(pb, HopfColeInitial(pb));
}

}  // namespace

TEST(Invert, UnitStepAtSeveralTimes) {
  const std::vector<double> ts = {0.1, 1.0, 5.0};
  const auto r = invert_batched([](cplx p) { return 1.0 / p; }, ts);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    EXPECT_NEAR(r.values[i], 1.0, 1e-8) << ts[i];
    EXPECT_EQ(r.status[i], PointStatus::ok);
  }
}

TEST(Invert, RampExponentialAndBranchCut) {
  const std::vector<double> t2 = {2.0}, t1 = {1.0};
  EXPECT_NEAR(invert([](cplx p) { return 1.0 / (p * p); }, t2).values[0], 2.0, 1e-7);
  EXPECT_NEAR(invert([](cplx p) { return 1.0 / (p + 1.0); }, t1).values[0], std::exp(-1.0), 1e-7);
  EXPECT_NEAR(invert([](cplx p) { return 1.0 / std::sqrt(p); }, t1).values[0], 0.564189583547756, 1e-7);
}

TEST(Invert, KnownPairSuiteBatched) {
  for (const auto& pair : known_pairs()) {
    const auto r = invert_batched(pair.F, kTimes);
    EXPECT_EQ(r.degraded(), 0u) << pair.name;
    for (std::size_t i = 0; i < kTimes.size(); ++i)
      EXPECT_NEAR(r.values[i], pair.f(kTimes[i]), 1e-7) << pair.name << " t=" << kTimes[i];
  }
}

TEST(Invert, ConvergesInM) {
  IltConfig m30;
  m30.M = 30;
  for (const auto& pair : known_pairs()) {
    const auto a = invert_batched(pair.F, kTimes);
    const auto b = invert_batched(pair.F, kTimes, m30);
    for (std::size_t i = 0; i < kTimes.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-7) << pair.name;
  }
}

TEST(Invert, Linearity) {
  auto F = [](cplx p) { return 1.0 / (p + 1.0); };
  auto G = [](cplx p) { return 1.0 / std::sqrt(p); };
  const double a = 2.5, b = -0.75;
  const auto combo = invert_batched([&](cplx p) { return a * F(p) + b * G(p); }, kTimes);
  const auto rf = invert_batched(F, kTimes), rg = invert_batched(G, kTimes);
  for (std::size_t i = 0; i < kTimes.size(); ++i)
    EXPECT_NEAR(combo.values[i], a * rf.values[i] + b * rg.values[i], 1e-7);
}

TEST(Invert, RejectsBadInput) {
  const std::vector<double> bad = {0.0, 1.0};
  EXPECT_THROW(invert([](cplx p) { return 1.0 / p; }, bad), std::invalid_argument);
  IltConfig cfg;
  cfg.M = 4;
  EXPECT_THROW(cfg.check(), std::invalid_argument);
  cfg = {};
  cfg.scale_factor = 1.0;
  EXPECT_THROW(cfg.check(), std::invalid_argument);
  cfg = {};
  cfg.tol = 0.0;
  EXPECT_THROW(cfg.check(), std::invalid_argument);
  EXPECT_THROW(invert([](cplx) { return cplx(NAN, 0.0); }, std::vector<double>{1.0}), std::domain_error);
}

TEST(Invert, QdBreakdownFallsBackAndFlags) {
  // Only the p = gamma sample is non-zero, so the quotient table divides 0/0.
  const auto r = invert([](cplx p) { return p.imag() == 0.0 ? cplx(1.0) : cplx(0.0); }, std::vector<double>{0.5});
  EXPECT_EQ(r.status[0], PointStatus::degraded);
  EXPECT_TRUE(std::isfinite(r.values[0]));
}

TEST(Contour, NodesFollowPrescription) {
  IltConfig cfg;
  const Contour c(2.0, cfg);
  EXPECT_DOUBLE_EQ(c.period(), 4.0);
  EXPECT_DOUBLE_EQ(c.gamma(), -std::log(1e-9) / 8.0);
  ASSERT_EQ(c.nodes().size(), 41u);
  EXPECT_DOUBLE_EQ(c.nodes()[3].imag(), 3 * pi / 4.0);
  EXPECT_DOUBLE_EQ(c.nodes()[40].real(), c.gamma());
}

TEST(OctaveGroups, PartitionsSortedTimes) {
  const std::vector<double> ts = {1.0, 0.1, 0.35, 0.4, 2.0, 3.99, 4.0};
  const auto groups = octave_groups(ts);
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_EQ(groups[0], (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(groups[1], (std::vector<std::size_t>{3, 0}));
  EXPECT_EQ(groups[2], (std::vector<std::size_t>{4, 5, 6}));
}

TEST(WynnEpsilon, AcceleratesAlternatingSeries) {
  std::vector<double> partial;
  double s = 0.0;
  for (int k = 1; k <= 15; ++k) {
    s += (k % 2 ? 1.0 : -1.0) / k;
    partial.push_back(s);
  }
  EXPECT_NEAR(ilt::detail::wynn_epsilon(partial), std::log(2.0), 1e-10);
  EXPECT_GT(std::abs(partial.back() - std::log(2.0)), 1e-2);
}

TEST(InvertField, SineRatioMidpointIsSteady) {
  const LaplaceField field(example1_heat());
  const std::vector<double> ts = {0.5};
  const auto r = invert_field(field, Component::U, 0.5, ts);
  EXPECT_NEAR(r.values[0], 2.0 / 3.0, 1e-9);
  EXPECT_EQ(r.status[0], PointStatus::ok);
}

TEST(InvertField, FluxVanishesAtLeftEnd) {
  const LaplaceField field(example1_heat());
  const std::vector<double> ts = {0.1, 0.5, 1.0};
  const auto r = invert_field(field, Component::Ux, 0.0, ts);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    EXPECT_NEAR(r.values[i], 0.0, 1e-10);
    EXPECT_EQ(r.status[i], PointStatus::ok);
  }
}

TEST(InvertField, ZeroDataInvertsToZero) {
  ReactionDiffusionProblem rd;
  rd.robin1 = {0.0, 2.0};
  rd.robin2 = {0.0, 2.0};
  const LaplaceField field(rd);
  const std::vector<double> ts = {0.2, 1.0};
  for (auto comp : {Component::U, Component::Ux})
    for (double x : {0.0, 0.5, 1.0}) {
      const auto r = invert_field(field, comp, x, ts);
      for (double v : r.values) EXPECT_EQ(v, 0.0);
    }
}

TEST(InvertField, SineRatioAgainstClosedForm) {
  const LaplaceField field(example1_heat());
  const std::vector<double> ts = {0.05, 0.3, 1.0};
  for (double x : {0.1, 0.7}) {
    const auto u = invert_field(field, Component::U, x, ts);
    for (std::size_t i = 0; i < ts.size(); ++i)
      EXPECT_NEAR(u.values[i], (2.0 + std::exp(-pi * pi * ts[i]) * std::cos(pi * x)) / 3.0, 1e-9);
  }
}
