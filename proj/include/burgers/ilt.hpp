#pragma once

// Numerical inverse Laplace transform: Fourier series on the line
// Re p = gamma, accelerated by a continued fraction whose coefficients come
// from a quotient-difference table (de Hoog, Knight & Stokes 1982).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "burgers/operational.hpp"

namespace burgers::ilt {

struct IltConfig {
  double tol = 1e-9;
  int M = 20;
  double scale_factor = 2.0;
  double gamma_shift = 0.0;

  void check() const {
    if (!(tol > 0.0)) throw std::invalid_argument("IltConfig: tol must be > 0");
    if (M < 5) throw std::invalid_argument("IltConfig: M must be >= 5");
    if (!(scale_factor > 1.0)) throw std::invalid_argument("IltConfig: scale_factor must be > 1");
  }
};

enum class PointStatus { ok, degraded };

struct IltResult {
  std::vector<double> values;
  std::vector<PointStatus> status;

  std::size_t degraded() const {
    return static_cast<std::size_t>(std::count(status.begin(), status.end(), PointStatus::degraded));
  }
};

/// Nodes p_k = gamma + i k pi / T', k = 0..2M, for the period T' = scale * t_max.
class Contour {
 public:
  Contour(double t_max, const IltConfig& cfg) : cfg_(cfg) {
    cfg.check();
    if (!(t_max > 0.0)) throw std::invalid_argument("Contour: times must be > 0");
    period_ = cfg.scale_factor * t_max;
    gamma_ = cfg.gamma_shift - std::log(cfg.tol) / (2.0 * period_);
    nodes_.reserve(2 * static_cast<std::size_t>(cfg.M) + 1);
    for (int k = 0; k <= 2 * cfg.M; ++k) nodes_.emplace_back(gamma_, k * std::numbers::pi / period_);
  }

  double gamma() const { return gamma_; }
  double period() const { return period_; }
  int M() const { return cfg_.M; }
  std::span<const cplx> nodes() const { return nodes_; }

 private:
  IltConfig cfg_;
  double period_;
  double gamma_;
  std::vector<cplx> nodes_;
};

namespace detail {

// Wynn's epsilon algorithm on a real sequence; returns the last
// even-column entry that is finite.
inline double wynn_epsilon(std::span<const double> seq) {
  const std::size_t n = seq.size();
  std::vector<double> prev(n + 1, 0.0), cur(seq.begin(), seq.end());
  double best = seq.back();
  for (std::size_t col = 1; col < n; ++col) {
    std::vector<double> next(n - col);
    bool ok = true;
    for (std::size_t i = 0; i + col < n; ++i) {
      const double diff = cur[i + 1] - cur[i];
      if (diff == 0.0) {
        ok = false;
        break;
      }
      next[i] = prev[i + 1] + 1.0 / diff;
    }
    if (!ok) break;
    prev.assign(cur.begin(), cur.end());
    cur = std::move(next);
    if (col % 2 == 0 && std::isfinite(cur.back())) best = cur.back();
  }
  return best;
}

}  // namespace detail

/// Continued-fraction coefficients for one sampled transform on one contour;
/// evaluating at many t reuses them. Samples whose magnitudes all stay at or
/// below `noise_floor` are treated as the zero transform.
class AcceleratedSeries {
 public:
  AcceleratedSeries(const Contour& contour, std::span<const cplx> samples, double noise_floor = 0.0)
      : gamma_(contour.gamma()), period_(contour.period()), M_(contour.M()) {
    const std::size_t n = 2 * static_cast<std::size_t>(M_) + 1;
    if (samples.size() != n) throw std::invalid_argument("AcceleratedSeries: need 2M+1 samples");
    a_.assign(samples.begin(), samples.end());
    a_[0] *= 0.5;
    for (const cplx& v : a_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::domain_error("transform is not finite on the inversion contour");
    double peak = 0.0;
    for (const cplx& v : a_) peak = std::max(peak, std::abs(v));
    zero_ = peak <= noise_floor;
    if (!zero_) build_qd();
  }

  bool qd_ok() const { return qd_ok_; }

  double operator()(double t, PointStatus* status = nullptr) const {
    if (zero_) {
      if (status) *status = PointStatus::ok;
      return 0.0;
    }
    const cplx z = std::polar(1.0, std::numbers::pi * t / period_);
    const double scale = std::exp(gamma_ * t) / period_;
    if (qd_ok_) {
      const double v = scale * continued_fraction(z);
      if (std::isfinite(v)) {
        if (status) *status = PointStatus::ok;
        return v;
      }
    }
    if (status) *status = PointStatus::degraded;
    return scale * epsilon_sum(z);
  }

 private:
  void build_qd() {
    const int M = M_;
    const std::size_t n2 = 2 * static_cast<std::size_t>(M);
    // e[r][i], q[r][i]: column r of the QD table, row i.
    std::vector<std::vector<cplx>> e(M + 1), q(M + 1);
    e[0].assign(n2 + 1, cplx{});
    q[1].resize(n2);
    for (std::size_t i = 0; i < n2; ++i) q[1][i] = a_[i + 1] / a_[i];
    for (int r = 1; r <= M; ++r) {
      const std::size_t rows = n2 - 2 * static_cast<std::size_t>(r) + 1;
      e[r].resize(rows);
      for (std::size_t i = 0; i < rows; ++i) e[r][i] = q[r][i + 1] - q[r][i] + e[r - 1][i + 1];
      if (r < M) {
        q[r + 1].resize(rows - 1);
        for (std::size_t i = 0; i + 1 < rows; ++i) q[r + 1][i] = q[r][i + 1] * e[r][i + 1] / e[r][i];
      }
    }
    d_.assign(n2 + 1, cplx{});
    d_[0] = a_[0];
    for (int m = 1; m <= M; ++m) {
      d_[2 * m - 1] = -q[m][0];
      d_[2 * m] = -e[m][0];
    }
    qd_ok_ = std::all_of(d_.begin(), d_.end(),
                         [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
  }

  double continued_fraction(cplx z) const {
    const std::size_t n2 = 2 * static_cast<std::size_t>(M_);
    // A_{n} = A_{n-1} + d_n z A_{n-2}, starting from A_{-1} = 0, A_0 = d_0.
    cplx A_prev2 = 0.0, A_prev = d_[0];
    cplx B_prev2 = 1.0, B_prev = 1.0;
    for (std::size_t n = 1; n < n2; ++n) {
      const cplx dz = d_[n] * z;
      const cplx A = A_prev + dz * A_prev2;
      const cplx B = B_prev + dz * B_prev2;
      A_prev2 = A_prev; A_prev = A;
      B_prev2 = B_prev; B_prev = B;
    }
    // Tail estimate replacing the last partial numerator.
    const cplx h = 0.5 * (1.0 + (d_[n2 - 1] - d_[n2]) * z);
    const cplx rem = -h * (1.0 - std::sqrt(1.0 + d_[n2] * z / (h * h)));
    const cplx A = A_prev + rem * A_prev2;
    const cplx B = B_prev + rem * B_prev2;
    return (A / B).real();
  }

  double epsilon_sum(cplx z) const {
    std::vector<double> partial;
    partial.reserve(a_.size());
    cplx zk = 1.0, sum = 0.0;
    for (const cplx& ak : a_) {
      sum += ak * zk;
      zk *= z;
      partial.push_back(sum.real());
    }
    return detail::wynn_epsilon(partial);
  }

  double gamma_;
  double period_;
  int M_;
  std::vector<cplx> a_;
  std::vector<cplx> d_;
  bool qd_ok_ = true;
  bool zero_ = false;
};

/// Inverts F at every t on one shared contour (period from max t).
template <class F>
IltResult invert(F&& transform, std::span<const double> times, const IltConfig& cfg = {}) {
  cfg.check();
  if (times.empty()) return {};
  for (double t : times)
    if (!(t > 0.0)) throw std::invalid_argument("invert: all times must be > 0");
  const Contour contour(*std::max_element(times.begin(), times.end()), cfg);
  std::vector<cplx> samples;
  samples.reserve(contour.nodes().size());
  for (const cplx& p : contour.nodes()) samples.push_back(transform(p));
  const AcceleratedSeries series(contour, samples);

  IltResult out;
  out.values.resize(times.size());
  out.status.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) out.values[i] = series(times[i], &out.status[i]);
  return out;
}

/// Groups of time indices sharing a contour: [t0, 4 t0) octaves of the sorted times.
inline std::vector<std::vector<std::size_t>> octave_groups(std::span<const double> times) {
  std::vector<std::size_t> order(times.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
  std::vector<std::vector<std::size_t>> groups;
  double start = 0.0;
  for (std::size_t idx : order) {
    if (groups.empty() || times[idx] >= 4.0 * start) {
      groups.emplace_back();
      start = times[idx];
    }
    groups.back().push_back(idx);
  }
  return groups;
}

/// invert() per octave group.
template <class F>
IltResult invert_batched(F&& transform, std::span<const double> times, const IltConfig& cfg = {}) {
  IltResult out;
  out.values.resize(times.size());
  out.status.resize(times.size());
  for (const auto& group : octave_groups(times)) {
    std::vector<double> ts;
    for (std::size_t i : group) ts.push_back(times[i]);
    auto part = invert(transform, ts, cfg);
    for (std::size_t j = 0; j < group.size(); ++j) {
      out.values[group[j]] = part.values[j];
      out.status[group[j]] = part.status[j];
    }
  }
  return out;
}

enum class Component { U, Ux };

/// Inverse transform of U or U_x at fixed x. Quadrature failures on any
/// contour node mark that group's points degraded; U_x samples below the
/// quadrature accuracy of U invert to zero.
inline IltResult invert_field(const LaplaceField& field, Component component, double x,
                              std::span<const double> times, const IltConfig& cfg = {}) {
  cfg.check();
  for (double t : times)
    if (!(t > 0.0)) throw std::invalid_argument("invert_field: all times must be > 0");
  IltResult out;
  out.values.resize(times.size());
  out.status.resize(times.size());
  for (const auto& group : octave_groups(times)) {
    double t_max = 0.0;
    for (std::size_t i : group) t_max = std::max(t_max, times[i]);
    const Contour contour(t_max, cfg);
    std::vector<cplx> samples;
    bool converged = true;
    double peak_u = 0.0;
    for (const cplx& p : contour.nodes()) {
      const FieldValue v = field.eval(x, p);
      converged = converged && v.converged;
      peak_u = std::max(peak_u, std::abs(v.U));
      samples.push_back(component == Component::U ? v.U : v.Ux);
    }
    const auto& q = field.quadrature();
    const double floor = component == Component::U ? 0.0 : q.abs_tol + q.rel_tol * peak_u;
    const AcceleratedSeries series(contour, samples, floor);
    for (std::size_t i : group) {
      out.values[i] = series(times[i], &out.status[i]);
      if (!converged) out.status[i] = PointStatus::degraded;
    }
  }
  return out;
}

}  // namespace burgers::ilt
