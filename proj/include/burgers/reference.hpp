#pragma once

// Reference solutions: the closed-form sine/cosine-ratio solution, the Cole
// Fourier-series solution for w0 = sin(pi x), an independent p-domain
// evaluation for the latter, and a finite-difference baseline.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "burgers/engine.hpp"
#include "burgers/errors.hpp"
#include "burgers/problem.hpp"
#include "burgers/quadrature.hpp"

namespace burgers::reference {

using std::numbers::pi;

// ---------------------------------------------------------------------------
// Example 1: w0 = 2 a^2 pi sin(pi x) / (sigma + cos(pi x)) on [0, 1].

struct Example1Params {
  double a_sq = 1.0;
  double sigma = 2.0;

  void check() const {
    if (!(a_sq > 0.0)) throw DomainError("example1: a_sq must be > 0");
    if (!(std::abs(sigma) > 1.0)) throw DomainError("example1: |sigma| must exceed 1");
  }
};

inline double example1_exact(double x, double t, const Example1Params& prm) {
  const double decay = std::exp(-pi * pi * prm.a_sq * t);
  return 2.0 * prm.a_sq * pi * decay * std::sin(pi * x) / (prm.sigma + decay * std::cos(pi * x));
}

inline BurgersProblem example1_problem(const Example1Params& prm, double T = 1.0) {
  prm.check();
  BurgersProblem pb;
  pb.a_sq = prm.a_sq;
  pb.l1 = 0.0;
  pb.l2 = 1.0;
  pb.alpha1 = 0.0;
  pb.alpha2 = 0.0;
  pb.T = T;
  pb.w0 = InitialProfile::closed_form([prm](double x) { return example1_exact(x, 0.0, prm); }, "example1");
  return pb;
}

/// Hopf-Cole initial data in closed form: u00 (sigma + cos(pi x)) / (1 + sigma).
inline double example1_phi(double x, const Example1Params& prm, double u00 = 1.0) {
  return u00 * (prm.sigma + std::cos(pi * x)) / (1.0 + prm.sigma);
}

/// Closed-form U(x,p), U_x(x,p) of the transformed heat problem.
inline std::pair<cplx, cplx> example1_laplace(double x, cplx p, const Example1Params& prm, double u00 = 1.0) {
  const double k2 = pi * pi * prm.a_sq;
  const double s1 = prm.sigma + 1.0;
  const cplx U = u00 * (k2 * prm.sigma + std::cos(pi * x) * p + p * prm.sigma) / (s1 * p * (k2 + p));
  const cplx Ux = -u00 * std::sin(pi * x) * pi / (s1 * (k2 + p));
  return {U, Ux};
}

/// Closed-form solution of the boundary system: {U(0,p), U_x(0,p), U(1,p), U_x(1,p)}.
inline std::array<cplx, 4> example1_boundary_vector(cplx p, const Example1Params& prm, double u00 = 1.0) {
  const double k2 = pi * pi * prm.a_sq;
  const cplx den = (k2 + p) * p * (prm.sigma + 1.0);
  return {u00 * (k2 * prm.sigma + p * prm.sigma + p) / den, cplx{},
          u00 * (k2 * prm.sigma + p * prm.sigma - p) / den, cplx{}};
}

/// Exact solution sampled on a grid.
inline SolutionTable example1_table(const SpaceTimeGrid& grid, const Example1Params& prm) {
  SolutionTable table(grid);
  table.meta.solver = "exact1";
  table.meta.config = {{"a_sq", prm.a_sq}, {"sigma", prm.sigma}};
  for (std::size_t n = 0; n < grid.nt(); ++n)
    for (std::size_t i = 0; i < grid.nx(); ++i) table.at(n, i) = example1_exact(grid.xs[i], grid.ts[n], prm);
  return table;
}

// ---------------------------------------------------------------------------
// Example 2: w0 = sin(pi x) on [0, 1].

inline BurgersProblem example2_problem(double a_sq, double T = 1.0) {
  if (!(a_sq > 0.0)) throw DomainError("example2: a_sq must be > 0");
  BurgersProblem pb;
  pb.a_sq = a_sq;
  pb.T = T;
  pb.w0 = InitialProfile::closed_form([](double x) { return std::sin(pi * x); }, "example2");
  return pb;
}

/// Exponent of the Hopf-Cole initial data for w0 = sin(pi x).
inline double example2_theta(double xi, double a_sq) { return (std::cos(pi * xi) - 1.0) / (2.0 * a_sq * pi); }

struct ColeSeriesParams {
  double a_sq = 1.0;
  int n_terms = 20;
  quad::QuadratureSpec quad{1e-13, 1e-13, 30};
};

/// Cole's Fourier-series solution, truncated after n_terms; the Fourier
/// coefficients are computed once at construction.
class ColeSeries {
 public:
  explicit ColeSeries(ColeSeriesParams prm) : prm_(prm) {
    if (prm.n_terms < 1) throw DomainError("cole_series: n_terms must be >= 1");
    if (!(prm.a_sq > 0.0)) throw DomainError("cole_series: a_sq must be > 0");
    const double a_sq = prm.a_sq;
    auto weight = [a_sq](double x) { return std::exp(example2_theta(x, a_sq)); };
    coeffs_.resize(static_cast<std::size_t>(prm.n_terms) + 1);
    for (int n = 0; n <= prm.n_terms; ++n) {
      auto r = quad::integrate<double>([&](double x) { return weight(x) * std::cos(n * pi * x); }, 0.0, 1.0,
                                       prm.quad);
      if (!r.converged)
        throw IntegrationError("cole_series: Fourier coefficient did not converge", r.value, r.error_estimate);
      coeffs_[static_cast<std::size_t>(n)] = (n == 0 ? 1.0 : 2.0) * r.value;
    }
    if (!(coeffs_[0] > 0.0)) throw DomainError("cole_series: c0 must be positive");
  }

  double operator()(double x, double t) const {
    double num = 0.0;
    double den = coeffs_[0];
    for (int n = 1; n <= prm_.n_terms; ++n) {
      const double c = coeffs_[static_cast<std::size_t>(n)] * std::exp(-n * n * pi * pi * prm_.a_sq * t);
      num += c * n * std::sin(n * pi * x);
      den += c * std::cos(n * pi * x);
    }
    if (!(std::abs(den) > kDenominatorGuard * coeffs_[0])) throw DegenerateDenominator(std::abs(den));
    return 2.0 * pi * prm_.a_sq * num / den;
  }

  const std::vector<double>& coefficients() const { return coeffs_; }
  const ColeSeriesParams& params() const { return prm_; }

 private:
  ColeSeriesParams prm_;
  std::vector<double> coeffs_;
};

inline double cole_series(double x, double t, const ColeSeriesParams& prm) { return ColeSeries(prm)(x, t); }

inline SolutionTable cole_table(const SpaceTimeGrid& grid, const ColeSeriesParams& prm) {
  const auto start = burgers::detail::Clock::now();
  SolutionTable table(grid);
  table.meta.solver = "cole";
  table.meta.config = {{"a_sq", prm.a_sq}, {"n_terms", prm.n_terms}};
  const ColeSeries series(prm);
  const double coeff_time = burgers::detail::seconds_since(start);
  for (std::size_t n = 0; n < grid.nt(); ++n)
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      try {
        table.at(n, i) = series(grid.xs[i], grid.ts[n]);
      } catch (const DegenerateDenominator&) {
        table.at(n, i) = std::numeric_limits<double>::quiet_NaN();
        table.status_at(n, i) = CellStatus::denominator_guard;
      }
    }
  table.meta.timings = {{"coefficients", coeff_time}, {"total", burgers::detail::seconds_since(start)}};
  return table;
}

/// Semi-analytic U(x,p), U_x(x,p) for w0 = sin(pi x) on [0, 1] with
/// homogeneous Neumann images, built from the integrals
/// I(lo, hi, +-) = int_lo^hi exp(eta(+-xi, p) + theta(xi)) dxi, eta(xi,p) = -xi sqrt(p)/a.
inline std::pair<cplx, cplx> example2_pdomain(double x, cplx p, double a_sq, double u00 = 1.0,
                                              const quad::QuadratureSpec& spec = {1e-13, 1e-12, 30}) {
  const double a = std::sqrt(a_sq);
  const cplx s = std::sqrt(p);
  auto eta = [&](double xi) { return -xi * s / a; };
  auto I = [&](double lo, double hi, double sign) {
    auto r = quad::integrate<cplx>([&](double xi) { return std::exp(eta(sign * xi) + example2_theta(xi, a_sq)); },
                                   lo, hi, spec);
    if (!r.converged)
      throw IntegrationError("example2_pdomain: integral did not converge", std::abs(r.value), r.error_estimate);
    return r.value;
  };

  const cplx K = -u00 / (2.0 * a * s * (std::exp(eta(2.0)) - 1.0));
  const cplx J_plus = I(0.0, 1.0, 1.0);
  const cplx J_minus = I(0.0, 1.0, -1.0);
  const cplx left = I(0.0, x, -1.0);   // int_0^x e^{xi s/a + theta}
  const cplx right = I(x, 1.0, 1.0);   // int_x^1 e^{-xi s/a + theta}

  const cplx e2mx = std::exp(eta(2.0 - x));
  const cplx ex = std::exp(eta(x));
  const cplx e2px = std::exp(eta(2.0 + x));
  const cplx emx = std::exp(eta(-x));

  const cplx R = u00 / (2.0 * a * s) * (ex * left + emx * right);
  const cplx Rx = -u00 / (2.0 * a_sq) * (ex * left - emx * right);
  const cplx U = K * J_plus * (e2mx + ex) + K * J_minus * (e2px + e2mx) + R;
  const cplx Ux = s * K / a * J_plus * (e2mx - ex) + s * K / a * J_minus * (-e2px + e2mx) + Rx;
  return {U, Ux};
}

// ---------------------------------------------------------------------------
// Finite-difference baseline.

struct FdScheme {
  double dx = 0.01;
  double dt = 0.001;
};

namespace detail {

// Thomas algorithm for a tridiagonal system with constant off-diagonals.
inline void solve_tridiagonal(double lower, double diag, double upper, std::vector<double>& rhs,
                              std::vector<double>& scratch) {
  const std::size_t n = rhs.size();
  if (n == 0) return;
  scratch.resize(n);
  scratch[0] = upper / diag;
  rhs[0] /= diag;
  for (std::size_t i = 1; i < n; ++i) {
    const double m = diag - lower * scratch[i - 1];
    scratch[i] = upper / m;
    rhs[i] = (rhs[i] - lower * rhs[i - 1]) / m;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
}

}  // namespace detail

/// Crank-Nicolson diffusion with explicit, centred, conservative convection
/// (w^2/2)_x; Dirichlet values pinned. Output is sampled on `sample` (times
/// must be multiples of dt; x is interpolated linearly between mesh nodes),
/// or on the full mesh at every step when no sample grid is given.
inline SolutionTable fd_solve(const BurgersProblem& problem, const FdScheme& scheme,
                              const SpaceTimeGrid* sample = nullptr) {
  const auto start = burgers::detail::Clock::now();
  if (!(scheme.dx > 0.0) || !(scheme.dt > 0.0)) throw DomainError("fd_solve: dx and dt must be > 0");
  const ValidatedProblem valid = validate(problem);
  const BurgersProblem& pb = valid.problem;
  const double span = pb.l2 - pb.l1;
  const auto cells = static_cast<std::size_t>(std::max(2LL, std::llround(span / scheme.dx)));
  const double dx = span / static_cast<double>(cells);
  const double dt = scheme.dt;
  const auto steps = static_cast<std::size_t>(std::llround(pb.T / dt));

  std::vector<double> mesh(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) mesh[i] = pb.l1 + dx * static_cast<double>(i);

  SpaceTimeGrid grid;
  if (sample) {
    grid = *sample;
    grid.check(pb.l1, pb.l2, pb.T);
  } else {
    grid.xs = mesh;
    for (std::size_t n = 1; n <= steps; ++n) grid.ts.push_back(dt * static_cast<double>(n));
  }
  std::vector<std::size_t> step_of_row(grid.nt());
  for (std::size_t n = 0; n < grid.nt(); ++n) {
    const double k = grid.ts[n] / dt;
    const double kr = std::round(k);
    if (std::abs(k - kr) > 1e-6 || kr > static_cast<double>(steps))
      throw DomainError("fd_solve: sample time " + std::to_string(grid.ts[n]) + " is not a multiple of dt");
    step_of_row[n] = static_cast<std::size_t>(kr);
  }

  SolutionTable table(grid);
  table.meta.solver = "fd";
  table.meta.config = {{"dx", dx}, {"dt", dt}, {"scheme", "crank-nicolson+explicit-conservative"}};
  table.meta.warnings = valid.warnings;

  std::vector<double> w(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) w[i] = pb.w0(mesh[i]);
  w.front() = pb.alpha1;
  w.back() = pb.alpha2;

  double range = std::max(std::abs(pb.alpha1), std::abs(pb.alpha2));
  for (double v : w) range = std::max(range, std::abs(v));
  const double limit = 10.0 * range;
  if (dt > dx * dx / (2.0 * range * dx + 1e-300))
    table.meta.warnings.push_back("dt exceeds the advisory explicit-convection bound dx^2/(2 max|w| dx)");

  auto emit = [&](std::size_t step) {
    for (std::size_t n = 0; n < grid.nt(); ++n) {
      if (step_of_row[n] != step) continue;
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        const double pos = (grid.xs[i] - pb.l1) / dx;
        const auto j = std::min(static_cast<std::size_t>(pos), cells - 1);
        const double frac = pos - static_cast<double>(j);
        table.at(n, i) = (1.0 - frac) * w[j] + frac * w[j + 1];
      }
    }
  };
  emit(0);

  const double r = pb.a_sq * dt / (dx * dx);
  const double c = dt / (4.0 * dx);  // dt * ((w^2/2)_{i+1} - (w^2/2)_{i-1}) / (2 dx)
  const std::size_t interior = cells - 1;
  std::vector<double> rhs(interior), scratch;
  for (std::size_t step = 1; step <= steps; ++step) {
    for (std::size_t k = 0; k < interior; ++k) {
      const std::size_t i = k + 1;
      const double diffusion = 0.5 * r * (w[i - 1] - 2.0 * w[i] + w[i + 1]);
      const double convection = c * (w[i + 1] * w[i + 1] - w[i - 1] * w[i - 1]);
      rhs[k] = w[i] + diffusion - convection;
    }
    rhs.front() += 0.5 * r * pb.alpha1;
    rhs.back() += 0.5 * r * pb.alpha2;
    detail::solve_tridiagonal(-0.5 * r, 1.0 + r, -0.5 * r, rhs, scratch);
    double peak = 0.0;
    for (std::size_t k = 0; k < interior; ++k) {
      w[k + 1] = rhs[k];
      peak = std::max(peak, std::abs(rhs[k]));
    }
    if (!(peak <= limit) && peak > 0.0)
      throw InstabilityError("fd_solve: max|w| = " + std::to_string(peak) + " exceeds 10x the initial range at step " +
                             std::to_string(step));
    emit(step);
  }

  table.meta.timings = {{"total", burgers::detail::seconds_since(start)}};
  return table;
}

}  // namespace burgers::reference
