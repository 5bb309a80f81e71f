#pragma once

// Adaptive Gauss-Kronrod (7/15) integration of real-, complex- and
// small-vector-valued integrands over a finite interval.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace burgers::quad {

/// Tolerances and limits for one adaptive integration.
struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_depth = 30;
  /// Hard cap on the number of live subintervals.
  std::size_t max_intervals = 4000;

  void check() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_depth < 1)
      throw std::invalid_argument("QuadratureSpec: abs_tol, rel_tol must be > 0 and max_depth >= 1");
  }
};

template <class V>
struct QuadratureResult {
  V value{};
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = true;
};

// Component access for the supported value types. The error of a
// multi-component value is the max over its real components.
template <class V>
struct ValueTraits;

template <>
struct ValueTraits<double> {
  static constexpr std::size_t dim = 1;
  static double get(const double& v, std::size_t) { return v; }
};

template <>
struct ValueTraits<std::complex<double>> {
  static constexpr std::size_t dim = 2;
  static double get(const std::complex<double>& v, std::size_t i) {
    return i == 0 ? v.real() : v.imag();
  }
};

template <std::size_t N>
struct ValueTraits<std::array<std::complex<double>, N>> {
  static constexpr std::size_t dim = 2 * N;
  static double get(const std::array<std::complex<double>, N>& v, std::size_t i) {
    return (i % 2 == 0) ? v[i / 2].real() : v[i / 2].imag();
  }
};

template <class V>
double magnitude(const V& v) {
  double m = 0.0;
  for (std::size_t i = 0; i < ValueTraits<V>::dim; ++i) m = std::max(m, std::abs(ValueTraits<V>::get(v, i)));
  return m;
}

template <std::size_t N>
std::array<std::complex<double>, N> operator*(double s, std::array<std::complex<double>, N> v) {
  for (auto& c : v) c *= s;
  return v;
}

template <std::size_t N>
std::array<std::complex<double>, N>& operator+=(std::array<std::complex<double>, N>& a,
                                                const std::array<std::complex<double>, N>& b) {
  for (std::size_t i = 0; i < N; ++i) a[i] += b[i];
  return a;
}

namespace detail {

// Kronrod abscissae (descending, last is the centre) and weights; the Gauss
// 7-point rule uses the odd-indexed abscissae.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Panel {
  double a;
  double b;
  int depth;
  V value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class V, class F>
Panel<V> gk15(F& f, double a, double b, int depth) {
  using T = ValueTraits<V>;
  constexpr std::size_t D = T::dim;
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<V, 15> fv;
  fv[7] = f(centre);
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = f(centre - dx);
    fv[14 - j] = f(centre + dx);
  }

  V kronrod = kWgk[7] * fv[7];
  V gauss = kWg[3] * fv[7];
  for (std::size_t j = 0; j < 7; ++j) {
    kronrod += kWgk[j] * fv[j];
    kronrod += kWgk[j] * fv[14 - j];
    if (j % 2 == 1) {
      gauss += kWg[j / 2] * fv[j];
      gauss += kWg[j / 2] * fv[14 - j];
    }
  }

  double err = 0.0;
  for (std::size_t c = 0; c < D; ++c) {
    const double k = T::get(kronrod, c);
    const double mean = 0.5 * k;
    double asc = kWgk[7] * std::abs(T::get(fv[7], c) - mean);
    for (std::size_t j = 0; j < 7; ++j)
      asc += kWgk[j] * (std::abs(T::get(fv[j], c) - mean) + std::abs(T::get(fv[14 - j], c) - mean));
    asc *= std::abs(half);
    double e = std::abs((k - T::get(gauss, c)) * half);
    // QUADPACK's rescaling of the raw |K15 - G7| estimate.
    if (asc != 0.0 && e != 0.0) e = asc * std::min(1.0, std::pow(200.0 * e / asc, 1.5));
    err = std::max(err, e);
  }
  return {a, b, depth, half * kronrod, err};
}

}  // namespace detail

/// Adaptive bisection with a 15-point Kronrod error estimate. Non-convergence
/// is reported through `converged`, never thrown.
template <class V = std::complex<double>, class F>
QuadratureResult<V> integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  spec.check();
  if (a > b) throw std::invalid_argument("integrate: a > b");
  QuadratureResult<V> out;
  if (a == b) return out;

  std::vector<detail::Panel<V>> heap;
  heap.push_back(detail::gk15<V>(f, a, b, 0));
  out.evaluations = 15;
  V total = heap.front().value;
  double total_err = heap.front().error;

  auto done = [&] { return total_err <= std::max(spec.abs_tol, spec.rel_tol * magnitude(total)); };

  while (!done()) {
    const auto worst = heap.front();
    if (worst.depth >= spec.max_depth || heap.size() >= spec.max_intervals) {
      out.converged = false;
      break;
    }
    std::pop_heap(heap.begin(), heap.end());
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    heap.push_back(detail::gk15<V>(f, worst.a, mid, worst.depth + 1));
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(detail::gk15<V>(f, mid, worst.b, worst.depth + 1));
    std::push_heap(heap.begin(), heap.end());
    out.evaluations += 30;

    // Re-sum rather than update incrementally so cancellation does not accumulate.
    total = V{};
    total_err = 0.0;
    for (const auto& panel : heap) {
      total += panel.value;
      total_err += panel.error;
    }
  }

  out.value = total;
  out.error_estimate = total_err;
  return out;
}

/// Two independent adaptive integrations on [a, knot] and [knot, b].
template <class V = std::complex<double>, class F>
QuadratureResult<V> integrate_split(F&& f, double a, double b, double knot, const QuadratureSpec& spec = {}) {
  if (!(a <= knot && knot <= b)) throw std::invalid_argument("integrate_split: knot outside [a, b]");
  auto lo = integrate<V>(f, a, knot, spec);
  auto hi = integrate<V>(f, knot, b, spec);
  QuadratureResult<V> out;
  out.value = lo.value;
  out.value += hi.value;
  out.error_estimate = lo.error_estimate + hi.error_estimate;
  out.evaluations = lo.evaluations + hi.evaluations;
  out.converged = lo.converged && hi.converged;
  return out;
}

}  // namespace burgers::quad
