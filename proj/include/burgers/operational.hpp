#pragma once

// Exact Laplace-domain solution U(x,p), U_x(x,p) of the linear
// reaction-diffusion problem with Robin data: one-sided Green's kernel,
// the free-space convolution R, and the 4x4 system fixing the boundary
// values.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "burgers/errors.hpp"
#include "burgers/problem.hpp"
#include "burgers/quadrature.hpp"

namespace burgers {

struct Kernel {
  double a = 1.0;  ///< sqrt(a_sq)
  double b = 0.0;  ///< reaction coefficient

  /// sqrt(b + p), principal branch (Re >= 0).
  cplx root(cplx p) const { return std::sqrt(b + p); }
};

/// exp(-x sqrt(b+p) / a).
inline cplx chi(double x, cplx p, const Kernel& k) { return std::exp(-x * k.root(p) / k.a); }

/// U(l1,p), U_x(l1,p), U(l2,p), U_x(l2,p).
struct BoundaryCoefficients {
  cplx U_l1;
  cplx Ux_l1;
  cplx U_l2;
  cplx Ux_l2;
};

using SourceFn = std::function<cplx(double, cplx)>;

namespace detail {

// Weighted free-space integrand: returns {R-integrand, R_x-integrand}.
struct ConvolutionIntegrand {
  const RealFn* phi;
  const SourceFn* source;
  double x;
  cplx p;
  cplx k;       // sqrt(b+p)/a
  cplx weight;  // 1 / (2 a sqrt(b+p))

  std::array<cplx, 2> operator()(double xi) const {
    cplx data = (*phi)(xi);
    if (source) data += (*source)(xi, p);
    const double d = xi - x;
    const cplx e = weight * data * std::exp(-std::abs(d) * k);
    const double sign = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    return {e, sign * k * e};
  }
};

inline quad::QuadratureResult<std::array<cplx, 2>> convolution(double x, cplx p, const RealFn& phi,
                                                               const SourceFn* source, const Kernel& kernel,
                                                               double l1, double l2,
                                                               const quad::QuadratureSpec& spec) {
  const cplx s = kernel.root(p);
  ConvolutionIntegrand f{&phi, source, x, p, s / kernel.a, 1.0 / (2.0 * kernel.a * s)};
  return quad::integrate_split<std::array<cplx, 2>>(f, l1, l2, std::clamp(x, l1, l2), spec);
}

}  // namespace detail

/// R(x,p) = int phi(xi)+F(xi,p) / (2a sqrt(b+p)) exp(-|xi-x| sqrt(b+p)/a) dxi.
inline quad::QuadratureResult<cplx> r_transform(double x, cplx p, const RealFn& phi, const SourceFn* source,
                                                const Kernel& kernel, double l1, double l2,
                                                const quad::QuadratureSpec& spec = {}) {
  auto both = detail::convolution(x, p, phi, source, kernel, l1, l2, spec);
  return {both.value[0], both.error_estimate, both.evaluations, both.converged};
}

/// dR/dx by differentiation under the integral.
inline quad::QuadratureResult<cplx> r_transform_dx(double x, cplx p, const RealFn& phi, const SourceFn* source,
                                                   const Kernel& kernel, double l1, double l2,
                                                   const quad::QuadratureSpec& spec = {}) {
  auto both = detail::convolution(x, p, phi, source, kernel, l1, l2, spec);
  return {both.value[1], both.error_estimate, both.evaluations, both.converged};
}

inline Kernel kernel_of(const ReactionDiffusionProblem& pb) { return {std::sqrt(pb.a_sq), pb.b}; }

/// Solves the four boundary equations: the two Robin rows and the two rows
/// obtained by evaluating the solution template at x = l1 and x = l2.
inline BoundaryCoefficients solve_boundary_system(cplx p, const ReactionDiffusionProblem& pb, cplx R_l1, cplx R_l2,
                                                  cplx G1, cplx G2) {
  const Kernel kernel = kernel_of(pb);
  const cplx s = kernel.root(p);
  const cplx c = chi(pb.l2 - pb.l1, p, kernel);
  const cplx as = kernel.a / (2.0 * s);

  Eigen::Matrix4cd m;
  m << pb.robin1.alpha, pb.robin1.beta, 0.0, 0.0,
       0.0, 0.0, pb.robin2.alpha, pb.robin2.beta,
       0.5, as, -0.5 * c, -as * c,
       -0.5 * c, as * c, 0.5, -as;
  Eigen::Vector4cd rhs(G1, G2, R_l1, R_l2);

  Eigen::PartialPivLU<Eigen::Matrix4cd> lu(m);
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  if (!(diag.minCoeff() > 1e-14 * diag.maxCoeff())) throw SingularMatrix(p);
  const Eigen::Vector4cd sol = lu.solve(rhs);
  return {sol(0), sol(1), sol(2), sol(3)};
}

namespace detail {

// Kronrod offsets in [-1, 1] in ascending order, with matching K15 and
// embedded G7 weights (zero at the Kronrod-only nodes).
constexpr std::array<double, 15> kronrod_offsets() {
  std::array<double, 15> o{};
  for (std::size_t j = 0; j < 7; ++j) {
    o[j] = -quad::detail::kXgk[j];
    o[14 - j] = quad::detail::kXgk[j];
  }
  return o;
}
constexpr std::array<double, 15> kronrod_weights() {
  std::array<double, 15> w{};
  for (std::size_t j = 0; j < 8; ++j) w[j] = w[14 - j] = quad::detail::kWgk[j];
  return w;
}
constexpr std::array<double, 15> gauss_weights() {
  std::array<double, 15> w{};
  for (std::size_t j = 1; j < 8; j += 2) w[j] = w[14 - j] = quad::detail::kWg[j / 2];
  return w;
}
inline constexpr std::array<double, 15> kOffsets = kronrod_offsets();
inline constexpr std::array<double, 15> kWeightK = kronrod_weights();
inline constexpr std::array<double, 15> kWeightG = gauss_weights();

}  // namespace detail

struct FieldValue {
  cplx U;
  cplx Ux;
  bool converged = true;
};

/// Precomputed quadrature layout for evaluating a whole x-row at fixed p.
struct RowPlan {
  std::vector<double> xs;
  std::vector<double> knots;             // sorted unique {l1, xs..., l2}
  std::vector<std::size_t> x_to_knot;    // xs[i] == knots[x_to_knot[i]]
  std::vector<std::size_t> subpanels;    // per knot interval
  std::vector<double> nodes;             // 15 Kronrod nodes per subpanel, interval-major
  std::vector<double> phi_at_nodes;
  double k_max = 0.0;
};

struct RowValues {
  std::vector<cplx> U;
  std::vector<cplx> Ux;
  BoundaryCoefficients coeffs{};
  bool converged = true;
  std::size_t fallbacks = 0;
};

/// Evaluator of U(x,p) and U_x(x,p). Boundary coefficients are cached per p.
/// Cache insertion is serialized; concurrent evaluation is safe.
class LaplaceField {
 public:
  explicit LaplaceField(ReactionDiffusionProblem pb, quad::QuadratureSpec spec = {})
      : pb_(std::make_shared<const ReactionDiffusionProblem>(std::move(pb))),
        kernel_(kernel_of(*pb_)),
        spec_(spec),
        cache_(std::make_shared<Cache>()) {
    if (!(pb_->l1 < pb_->l2)) throw DomainError("interval requires l1 < l2");
    if (!(pb_->a_sq > 0.0)) throw DomainError("a_sq must be > 0");
    auto robin_ok = [](const RobinCondition& r) { return r.alpha * r.alpha + r.beta * r.beta != 0.0; };
    if (!robin_ok(pb_->robin1) || !robin_ok(pb_->robin2))
      throw DomainError("Robin conditions need alpha^2 + beta^2 != 0");
    if (pb_->F) source_ = *pb_->F;
  }

  const ReactionDiffusionProblem& problem() const { return *pb_; }
  const Kernel& kernel() const { return kernel_; }
  const quad::QuadratureSpec& quadrature() const { return spec_; }

  quad::QuadratureResult<cplx> R(double x, cplx p) const {
    return r_transform(x, p, pb_->phi, source_ptr(), kernel_, pb_->l1, pb_->l2, spec_);
  }
  quad::QuadratureResult<cplx> R_x(double x, cplx p) const {
    return r_transform_dx(x, p, pb_->phi, source_ptr(), kernel_, pb_->l1, pb_->l2, spec_);
  }

  BoundaryCoefficients coefficients(cplx p) const { return cached(p).coeffs; }

  FieldValue eval(double x, cplx p) const {
    const Entry entry = cached(p);
    auto conv = detail::convolution(x, p, pb_->phi, source_ptr(), kernel_, pb_->l1, pb_->l2, spec_);
    auto [U, Ux] = assemble(x, p, entry.coeffs, conv.value[0], conv.value[1]);
    return {U, Ux, conv.converged && entry.converged};
  }
  cplx eval_U(double x, cplx p) const { return eval(x, p).U; }
  cplx eval_Ux(double x, cplx p) const { return eval(x, p).Ux; }

  /// Fill the coefficient cache for a node set before parallel sweeps.
  void prepopulate(std::span<const cplx> ps) const {
    for (const cplx& p : ps) (void)cached(p);
  }

  std::size_t cache_size() const {
    std::shared_lock lock(cache_->mutex);
    return cache_->entries.size();
  }

  /// Kronrod layout for a row sweep. `k_max` bounds |sqrt(b+p)|/a over the
  /// node set the plan will serve; subpanels keep |k| h <= 2.
  RowPlan plan_row(std::vector<double> xs, double k_max) const {
    RowPlan plan;
    plan.k_max = k_max;
    const double l1 = pb_->l1, l2 = pb_->l2;
    for (double x : xs)
      if (x < l1 || x > l2) throw DomainError("row abscissa outside [l1, l2]");
    plan.knots = xs;
    plan.knots.push_back(l1);
    plan.knots.push_back(l2);
    std::sort(plan.knots.begin(), plan.knots.end());
    plan.knots.erase(std::unique(plan.knots.begin(), plan.knots.end()), plan.knots.end());
    for (double x : xs)
      plan.x_to_knot.push_back(
          static_cast<std::size_t>(std::lower_bound(plan.knots.begin(), plan.knots.end(), x) - plan.knots.begin()));
    plan.xs = std::move(xs);

    const double span = l2 - l1;
    const double h_phi = span / 16.0;
    for (std::size_t j = 0; j + 1 < plan.knots.size(); ++j) {
      const double len = plan.knots[j + 1] - plan.knots[j];
      const double by_kernel = std::ceil(len * k_max / 2.0);
      const double by_phi = std::ceil(len / h_phi);
      const auto n = static_cast<std::size_t>(std::max({1.0, by_kernel, by_phi}));
      plan.subpanels.push_back(n);
      const double h = len / static_cast<double>(n);
      for (std::size_t s = 0; s < n; ++s) {
        const double left = plan.knots[j] + h * static_cast<double>(s);
        const double centre = left + 0.5 * h;
        for (std::size_t q = 0; q < 15; ++q) plan.nodes.push_back(centre + 0.5 * h * detail::kOffsets[q]);
      }
    }
    plan.phi_at_nodes.reserve(plan.nodes.size());
    for (double xi : plan.nodes) plan.phi_at_nodes.push_back(pb_->phi(xi));
    return plan;
  }

  /// U and U_x at every plan abscissa for one p: two exponential recurrences
  /// over the knot intervals give the left and right halves of R at once.
  RowValues eval_row(const RowPlan& plan, cplx p) const {
    const cplx s = kernel_.root(p);
    const cplx k = s / kernel_.a;
    const cplx weight = 1.0 / (2.0 * kernel_.a * s);
    const std::size_t nk = plan.knots.size();

    RowValues out;
    std::vector<std::array<cplx, 2>> left_pieces(nk - 1), right_pieces(nk - 1);
    std::vector<cplx> decay(nk - 1);
    std::vector<cplx> data(15);
    std::size_t node = 0;

    // Node weights within one subpanel: e^{-(xi-left)k} and e^{-(right-xi)k}.
    std::array<cplx, 15> from_left, from_right;
    cplx sub_decay;
    double weights_h = -1.0;
    for (std::size_t j = 0; j + 1 < nk; ++j) {
      const std::size_t n = plan.subpanels[j];
      const double len = plan.knots[j + 1] - plan.knots[j];
      const double h = len / static_cast<double>(n);
      if (std::abs(h - weights_h) > 1e-13 * h) {
        weights_h = h;
        sub_decay = std::exp(-h * k);
        for (std::size_t q = 0; q < 15; ++q) {
          from_left[q] = std::exp(-0.5 * h * (1.0 + detail::kOffsets[q]) * k);
          from_right[q] = sub_decay / from_left[q];
        }
      }
      decay[j] = n == 1 ? sub_decay : std::exp(-len * k);

      cplx acc_l{}, acc_r{};  // integrals over [knot_j, current right] measured from the right / left end
      cplx pending_l_decay = 1.0;
      for (std::size_t sp = 0; sp < n; ++sp, node += 15) {
        cplx kl{}, gl{}, kr{}, gr{};
        if (source_) {
          for (std::size_t q = 0; q < 15; ++q)
            data[q] = plan.phi_at_nodes[node + q] + source_(plan.nodes[node + q], p);
          for (std::size_t q = 0; q < 15; ++q) {
            kr += detail::kWeightK[q] * data[q] * from_right[q];
            kl += detail::kWeightK[q] * data[q] * from_left[q];
            gr += detail::kWeightG[q] * data[q] * from_right[q];
            gl += detail::kWeightG[q] * data[q] * from_left[q];
          }
        } else {
          // Real data: avoid full complex products.
          for (std::size_t q = 0; q < 15; ++q) {
            const double d = plan.phi_at_nodes[node + q];
            const double wk = detail::kWeightK[q] * d;
            const double wg = detail::kWeightG[q] * d;
            kr += wk * from_right[q];
            kl += wk * from_left[q];
            gr += wg * from_right[q];
            gl += wg * from_left[q];
          }
        }
        const double half = 0.5 * h;
        kr *= half; kl *= half; gr *= half; gl *= half;
        const double err = std::max(quad::magnitude(kr - gr), quad::magnitude(kl - gl));
        const double tol = std::max(spec_.abs_tol * h / (pb_->l2 - pb_->l1),
                                    spec_.rel_tol * std::max(std::abs(kr), std::abs(kl)));
        if (!(err <= tol)) {
          const double a = plan.knots[j] + h * static_cast<double>(sp);
          auto fix = fallback(a, a + h, p, k);
          kr = fix.value[0];
          kl = fix.value[1];
          ++out.fallbacks;
          if (!fix.converged) out.converged = false;
        }
        // acc_r: int_{knot_j}^{right} e^{-(right - xi) k} data, advanced subpanel by subpanel.
        acc_r = sub_decay * acc_r + kr;
        // acc_l: int_{knot_j}^{right} e^{-(xi - knot_j) k} data.
        acc_l += pending_l_decay * kl;
        pending_l_decay *= sub_decay;
      }
      left_pieces[j] = {acc_r, acc_l};
    }

    // Left integrals L_j = int_{l1}^{x_j} e^{-(x_j - xi) k}, right integrals
    // Rt_j = int_{x_j}^{l2} e^{-(xi - x_j) k}.
    std::vector<cplx> L(nk), Rt(nk);
    L[0] = 0.0;
    for (std::size_t j = 1; j < nk; ++j) L[j] = decay[j - 1] * L[j - 1] + left_pieces[j - 1][0];
    Rt[nk - 1] = 0.0;
    for (std::size_t j = nk - 1; j-- > 0;) Rt[j] = decay[j] * Rt[j + 1] + left_pieces[j][1];

    const cplx R_l1 = weight * Rt[0];
    const cplx R_l2 = weight * L[nk - 1];
    out.coeffs = solve(p, R_l1, R_l2);

    out.U.resize(plan.xs.size());
    out.Ux.resize(plan.xs.size());
    for (std::size_t i = 0; i < plan.xs.size(); ++i) {
      const std::size_t j = plan.x_to_knot[i];
      const cplx R = weight * (L[j] + Rt[j]);
      const cplx Rx = weight * k * (Rt[j] - L[j]);
      std::tie(out.U[i], out.Ux[i]) = assemble(plan.xs[i], p, out.coeffs, R, Rx);
    }
    return out;
  }

  /// The solution template and its x-derivative given boundary values and R.
  std::pair<cplx, cplx> assemble(double x, cplx p, const BoundaryCoefficients& c, cplx R, cplx Rx) const {
    const cplx s = kernel_.root(p);
    const double a = kernel_.a;
    const cplx right = std::exp(-(pb_->l2 - x) * s / a) * (c.U_l2 * s + a * c.Ux_l2);
    const cplx left = std::exp(-(x - pb_->l1) * s / a) * (c.U_l1 * s - a * c.Ux_l1);
    const cplx U = (right + left) / (2.0 * s) + R;
    const cplx Ux = (right - left) / (2.0 * a) + Rx;
    return {U, Ux};
  }

 private:
  struct Entry {
    BoundaryCoefficients coeffs;
    bool converged = true;
  };
  struct Cache {
    mutable std::shared_mutex mutex;
    std::map<std::pair<double, double>, Entry> entries;
  };

  const SourceFn* source_ptr() const { return source_ ? &source_ : nullptr; }

  BoundaryCoefficients solve(cplx p, cplx R_l1, cplx R_l2) const {
    const cplx G1 = pb_->g1.G ? (*pb_->g1.G)(p) : cplx{};
    const cplx G2 = pb_->g2.G ? (*pb_->g2.G)(p) : cplx{};
    return solve_boundary_system(p, *pb_, R_l1, R_l2, G1, G2);
  }

  Entry cached(cplx p) const {
    const auto key = std::make_pair(p.real(), p.imag());
    {
      std::shared_lock lock(cache_->mutex);
      if (auto it = cache_->entries.find(key); it != cache_->entries.end()) return it->second;
    }
    const auto r1 = R(pb_->l1, p);
    const auto r2 = R(pb_->l2, p);
    Entry e{solve(p, r1.value, r2.value), r1.converged && r2.converged};
    std::unique_lock lock(cache_->mutex);
    return cache_->entries.emplace(key, e).first->second;
  }

  // Adaptive integral of data * {e^{-(b-xi)k}, e^{-(xi-a)k}} over one subpanel.
  quad::QuadratureResult<std::array<cplx, 2>> fallback(double a, double b, cplx p, cplx k) const {
    auto f = [&](double xi) -> std::array<cplx, 2> {
      cplx d = pb_->phi(xi);
      if (source_) d += source_(xi, p);
      return {d * std::exp(-(b - xi) * k), d * std::exp(-(xi - a) * k)};
    };
    quad::QuadratureSpec local = spec_;
    local.abs_tol = spec_.abs_tol * (b - a) / (pb_->l2 - pb_->l1);
    return quad::integrate<std::array<cplx, 2>>(f, a, b, local);
  }

  std::shared_ptr<const ReactionDiffusionProblem> pb_;
  Kernel kernel_;
  quad::QuadratureSpec spec_;
  SourceFn source_;
  std::shared_ptr<Cache> cache_;
};

inline LaplaceField build_field(const ReactionDiffusionProblem& pb, quad::QuadratureSpec spec = {}) {
  return LaplaceField(pb, spec);
}

/// Robin residuals alpha_i U(l_i,p) + beta_i U_x(l_i,p) - G_i(p), evaluated
/// through the solution template at the endpoints.
inline std::pair<cplx, cplx> boundary_residuals(const LaplaceField& field, cplx p) {
  const auto& pb = field.problem();
  const auto left = field.eval(pb.l1, p);
  const auto right = field.eval(pb.l2, p);
  const cplx G1 = pb.g1.G ? (*pb.g1.G)(p) : cplx{};
  const cplx G2 = pb.g2.G ? (*pb.g2.G)(p) : cplx{};
  return {pb.robin1.alpha * left.U + pb.robin1.beta * left.Ux - G1,
          pb.robin2.alpha * right.U + pb.robin2.beta * right.Ux - G2};
}

}  // namespace burgers
