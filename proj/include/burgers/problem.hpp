#pragma once

// Problem definitions: the Dirichlet Burgers problem, the general linear
// reaction-diffusion problem with Robin data it maps onto, and the Hopf-Cole
// transforms between them.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

// Boost 1.74 pchip calls isnan unqualified.
#include <math.h>
#include <boost/math/interpolators/pchip.hpp>

#include "burgers/errors.hpp"

namespace burgers {

using cplx = std::complex<double>;
using RealFn = std::function<double(double)>;
using LaplaceFn = std::function<cplx(cplx)>;

/// Initial profile w0: either a closed-form evaluator or a sampled table
/// interpolated with a monotone piecewise cubic.
class InitialProfile {
 public:
  InitialProfile() : InitialProfile([](double) { return 0.0; }) {}

  static InitialProfile closed_form(RealFn f, std::string name = "closed-form") {
    return InitialProfile(std::move(f), std::move(name));
  }

  static InitialProfile sampled(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size() || xs.size() < 4)
      throw DomainError("sampled profile needs matching abscissae/values with at least 4 points");
    for (std::size_t i = 1; i < xs.size(); ++i)
      if (!(xs[i] > xs[i - 1])) throw DomainError("sampled profile abscissae must be strictly increasing");
    const double lo = xs.front();
    const double hi = xs.back();
    auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(xs),
                                                                                           std::move(ys));
    InitialProfile p([spline, lo, hi](double x) { return (*spline)(std::clamp(x, lo, hi)); }, "sampled");
    p.sample_lo_ = lo;
    p.sample_hi_ = hi;
    return p;
  }

  double operator()(double x) const { return fn_(x); }
  const std::string& name() const { return name_; }
  bool is_sampled() const { return sample_lo_.has_value(); }
  /// Sampled abscissae range; empty for closed forms.
  std::optional<std::pair<double, double>> sample_range() const {
    if (!sample_lo_) return std::nullopt;
    return std::make_pair(*sample_lo_, *sample_hi_);
  }

 private:
  InitialProfile(RealFn f, std::string name = "closed-form") : fn_(std::move(f)), name_(std::move(name)) {}

  RealFn fn_;
  std::string name_;
  std::optional<double> sample_lo_;
  std::optional<double> sample_hi_;
};

/// w_t - a^2 w_xx + w w_x = 0 on (l1, l2) x (0, T] with constant Dirichlet data.
struct BurgersProblem {
  double a_sq = 1.0;
  double l1 = 0.0;
  double l2 = 1.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  InitialProfile w0;
  double T = 1.0;
};

struct RobinCondition {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Boundary datum g(t) with its Laplace image G(p) when known.
struct BoundaryData {
  RealFn g = [](double) { return 0.0; };
  std::optional<LaplaceFn> G = LaplaceFn([](cplx) { return cplx{}; });
};

/// u_t - a^2 u_xx + b u = f(x,t), Robin data at both ends, u(x,0) = phi(x).
struct ReactionDiffusionProblem {
  double a_sq = 1.0;
  double b = 0.0;
  double l1 = 0.0;
  double l2 = 1.0;
  RobinCondition robin1;
  RobinCondition robin2;
  RealFn phi = [](double) { return 0.0; };
  /// Source in the time domain (informational; the operational solution uses F).
  std::optional<std::function<double(double, double)>> f;
  /// Laplace image F(xi, p) of the source, user supplied.
  std::optional<std::function<cplx(double, cplx)>> F;
  BoundaryData g1;
  BoundaryData g2;
};

struct ValidatedProblem {
  BurgersProblem problem;
  std::vector<std::string> warnings;
};

/// Throws DomainError on l1 >= l2, a_sq <= 0 or T <= 0; boundary/initial
/// incompatibility only produces warnings.
inline ValidatedProblem validate(const BurgersProblem& pb, double compat_tol = 1e-9) {
  if (!(pb.l1 < pb.l2)) throw DomainError("interval requires l1 < l2");
  if (!(pb.a_sq > 0.0)) throw DomainError("viscosity a_sq must be > 0");
  if (!(pb.T > 0.0)) throw DomainError("time horizon T must be > 0");
  if (!std::isfinite(pb.alpha1) || !std::isfinite(pb.alpha2)) throw DomainError("boundary values must be finite");

  ValidatedProblem out{pb, {}};
  if (auto range = pb.w0.sample_range()) {
    const double span = pb.l2 - pb.l1;
    if (range->first > pb.l1 + 1e-12 * span || range->second < pb.l2 - 1e-12 * span)
      throw DomainError("sampled initial profile does not span [l1, l2]");
  }
  auto warn_mismatch = [&](const char* side, double w, double alpha) {
    if (std::abs(w - alpha) > compat_tol * std::max(1.0, std::abs(alpha))) {
      std::ostringstream msg;
      msg << "initial profile incompatible with boundary at " << side << ": w0 = " << w << ", alpha = " << alpha;
      out.warnings.push_back(msg.str());
    }
  };
  warn_mismatch("l1", pb.w0(pb.l1), pb.alpha1);
  warn_mismatch("l2", pb.w0(pb.l2), pb.alpha2);
  return out;
}

namespace detail {

inline constexpr std::array<double, 4> kGl8Nodes = {0.1834346424956498049394761, 0.5255324099163289858177390,
                                                    0.7966664774136267395915539, 0.9602898564975362316835609};
inline constexpr std::array<double, 4> kGl8Weights = {0.3626837833783619829651504, 0.3137066458778872873379622,
                                                      0.2223810344533744705443560, 0.1012285362903762591525314};

template <class F>
double gauss_legendre8(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += kGl8Weights[i] * (f(c - h * kGl8Nodes[i]) + f(c + h * kGl8Nodes[i]));
  return h * s;
}

}  // namespace detail

/// phi(x) = u00 * exp(-(1/2a^2) * int_{l1}^{x} w0), with the cumulative
/// integral cached on a uniform panel grid. Cheap to copy; immutable.
class HopfColeInitial {
 public:
  static constexpr std::size_t kMinPanels = 512;
  static constexpr std::size_t kMaxPanels = std::size_t{1} << 17;

  HopfColeInitial(const BurgersProblem& pb, double u00 = 1.0, double tol = 1e-12) {
    if (u00 == 0.0) throw DomainError("u(l1,0) must be non-zero");
    auto st = std::make_shared<State>();
    st->w0 = pb.w0;
    st->l1 = pb.l1;
    st->l2 = pb.l2;
    st->u00 = u00;
    st->inv_two_a_sq = 1.0 / (2.0 * pb.a_sq);

    const auto& w0 = st->w0;
    auto panel_sums = [&](std::size_t n) {
      std::vector<double> sums(n);
      const double h = (pb.l2 - pb.l1) / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double a = pb.l1 + h * static_cast<double>(i);
        sums[i] = detail::gauss_legendre8(w0, a, i + 1 == n ? pb.l2 : a + h);
      }
      return sums;
    };

    // Richardson-style check: each coarse panel against its two halves.
    std::size_t n = kMinPanels;
    std::vector<double> coarse = panel_sums(n);
    for (;;) {
      std::vector<double> fine = panel_sums(2 * n);
      double diff = 0.0;
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        diff += std::abs(coarse[i] - (fine[2 * i] + fine[2 * i + 1]));
        total += fine[2 * i] + fine[2 * i + 1];
      }
      if (diff <= std::max(tol, tol * std::abs(total))) {
        n *= 2;
        coarse = std::move(fine);
        break;
      }
      if (2 * n >= kMaxPanels)
        throw IntegrationError("cumulative integral of w0 did not converge", total, diff);
      n *= 2;
      coarse = std::move(fine);
    }

    st->h = (pb.l2 - pb.l1) / static_cast<double>(n);
    st->cumulative.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) st->cumulative[i + 1] = st->cumulative[i] + coarse[i];

    // Jump heuristic on the panel-edge samples.
    double lo = w0(pb.l1), hi = lo, max_step = 0.0;
    double prev = lo;
    for (std::size_t i = 1; i <= n; ++i) {
      const double v = w0(pb.l1 + st->h * static_cast<double>(i));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      max_step = std::max(max_step, std::abs(v - prev));
      prev = v;
    }
    if (hi > lo && max_step > 0.25 * (hi - lo))
      st->warnings.push_back("w0 appears discontinuous; the Hopf-Cole transform treats it as a generalized profile");
    state_ = std::move(st);
  }

  /// Integral of w0 from l1 to x.
  double cumulative(double x) const {
    const auto& st = *state_;
    const double clamped = std::clamp(x, st.l1, st.l2);
    const std::size_t n = st.cumulative.size() - 1;
    auto i = static_cast<std::size_t>((clamped - st.l1) / st.h);
    i = std::min(i, n - 1);
    const double left = st.l1 + st.h * static_cast<double>(i);
    if (clamped == left) return st.cumulative[i];
    return st.cumulative[i] + detail::gauss_legendre8(st.w0, left, clamped);
  }

  double operator()(double x) const {
    return state_->u00 * std::exp(-state_->inv_two_a_sq * cumulative(x));
  }

  double u00() const { return state_->u00; }
  std::size_t panels() const { return state_->cumulative.size() - 1; }
  const std::vector<std::string>& warnings() const { return state_->warnings; }

 private:
  struct State {
    InitialProfile w0;
    double l1 = 0.0;
    double l2 = 1.0;
    double u00 = 1.0;
    double inv_two_a_sq = 0.5;
    double h = 0.0;
    std::vector<double> cumulative;
    std::vector<std::string> warnings;
  };
  std::shared_ptr<const State> state_;
};

inline HopfColeInitial hopf_cole_initial(const BurgersProblem& pb, double u00 = 1.0) {
  return HopfColeInitial(pb, u00);
}

/// Relative guard factor for |u| in the Hopf-Cole ratio.
inline constexpr double kDenominatorGuard = 1e-12;

/// w = -2 a^2 ux / u. `scale` is the reference magnitude of u (row maximum in
/// the engine); the guard trips when |u| <= 1e-12 * scale.
inline double hopf_cole_ratio(double u, double ux, double a_sq, double scale = 1.0) {
  if (!(std::abs(u) > kDenominatorGuard * scale)) throw DegenerateDenominator(std::abs(u));
  return -2.0 * a_sq * ux / u + 0.0;
}

/// The heat problem obtained from a Burgers problem by the Hopf-Cole
/// substitution: b = 0, no source, homogeneous Robin (alpha_i, 2a^2).
inline ReactionDiffusionProblem heat_problem(const BurgersProblem& pb, const HopfColeInitial& phi) {
  ReactionDiffusionProblem rd;
  rd.a_sq = pb.a_sq;
  rd.b = 0.0;
  rd.l1 = pb.l1;
  rd.l2 = pb.l2;
  rd.robin1 = {pb.alpha1, 2.0 * pb.a_sq};
  rd.robin2 = {pb.alpha2, 2.0 * pb.a_sq};
  rd.phi = phi;
  return rd;
}

}  // namespace burgers
