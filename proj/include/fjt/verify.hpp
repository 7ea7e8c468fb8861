#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fjt/error.hpp"
#include "fjt/kernels.hpp"
#include "fjt/quad/adaptive.hpp"
#include "fjt/quad/oscillatory.hpp"
#include "fjt/specfun.hpp"
#include "fjt/transforms.hpp"

namespace fjt::verify {

enum class IdentityId { lemma1, laplace_k, bessel_repr, hankel_closed, kernel_bound, k_inequality };

inline constexpr IdentityId all_identities[] = {IdentityId::lemma1,        IdentityId::laplace_k,
                                                IdentityId::bessel_repr,   IdentityId::hankel_closed,
                                                IdentityId::kernel_bound,  IdentityId::k_inequality};

inline const char* to_string(IdentityId id) {
  switch (id) {
    case IdentityId::lemma1: return "lemma1";
    case IdentityId::laplace_k: return "laplace_k";
    case IdentityId::bessel_repr: return "bessel_repr";
    case IdentityId::hankel_closed: return "hankel_closed";
    case IdentityId::kernel_bound: return "kernel_bound";
    case IdentityId::k_inequality: return "k_inequality";
  }
  return "?";
}

inline IdentityId identity_from_string(std::string_view s) {
  for (auto id : all_identities)
    if (s == to_string(id)) return id;
  throw DomainError("unknown identity '" + std::string(s) + "'");
}

enum class Metric { relative, absolute, bound };

inline const char* to_string(Metric m) {
  switch (m) {
    case Metric::relative: return "relative";
    case Metric::absolute: return "absolute";
    case Metric::bound: return "bound";
  }
  return "?";
}

/// The grid coordinates a check was evaluated at; unused fields stay empty.
struct GridPoint {
  std::optional<double> a, c, n, u, x, delta;
};

struct IdentityReport {
  IdentityId id;
  GridPoint point;
  double lhs = 0.0;
  double rhs = 0.0;
  /// relative: |lhs - rhs| / |rhs|; absolute: |lhs - rhs|; bound: lhs / rhs - 1 clipped at 0.
  double residual = 0.0;
  double tolerance = 0.0;
  Metric metric = Metric::relative;
  bool passed = false;
};

inline constexpr double identity_tolerance = 1e-6;
inline constexpr double absolute_tolerance = 1e-9;
inline constexpr double hankel_tolerance = 1e-4;

namespace detail {

/// |sin(n u)| below this switches the sine-factor identities to the absolute metric.
inline constexpr double sine_zero = 1e-8;

inline IdentityReport finish(IdentityReport r, double rel_tol) {
  if (r.metric == Metric::absolute) {
    r.residual = std::abs(r.lhs - r.rhs);
    r.tolerance = absolute_tolerance;
  } else {
    r.residual = std::abs(r.lhs - r.rhs) / std::abs(r.rhs);
    r.tolerance = rel_tol;
  }
  r.passed = r.residual <= r.tolerance;
  return r;
}

/// Inner quadrature tolerances three digits tighter than the identity's,
/// for an integral of magnitude `scale` (or an absolute target when scale is 0).
inline quad::QuadratureSpec inner_spec(double tol, double scale) {
  quad::QuadratureSpec s;
  s.rel_tol = tol * 1e-3;
  s.abs_tol = scale > 0.0 ? tol * 1e-3 * scale : absolute_tolerance * 1e-3;
  s.max_subdivisions = 5000;
  return s;
}

}  // namespace detail

/// RHS of the closed-form kernel integral:
/// 2^(2(c-a)+1) pi sin(n u) cosh(u)^(2(c-a)+1) / (sinh(u) sinh(pi n)).
inline double lemma1_rhs(const JacobiParams& p, int n, double u) {
  const double e = 2.0 * (p.c() - p.a()) + 1.0;
  return std::exp(e * std::numbers::ln2 + std::log(std::numbers::pi) + e * std::log(std::cosh(u)) -
                  kernels::log_sinh_pi(n)) *
         std::sin(n * u) / std::sinh(u);
}

/// Gamma(2(c-a)+1) |Gamma(a+in/2) / Gamma(c)|^2.
inline double lemma1_prefactor(const JacobiParams& p, int n) {
  return std::exp(specfun::log_gamma_real(2.0 * (p.c() - p.a()) + 1.0) + specfun::log_gamma_abs_sq(p.a(), n) -
                  2.0 * specfun::log_gamma_real(p.c()));
}

/// int_0^inf y^(c-1) G(sqrt y, u) F_n(sqrt y) dy, both kernels taken at argument -y (decay y^(-3/2)).
inline quad::QuadratureResult lemma1_integral(const JacobiParams& p, int n, double u, quad::QuadratureSpec spec) {
  const double ch2 = std::cosh(u) * std::cosh(u);
  auto g = [&](double y) {
    if (y == 0.0) return 0.0;
    return std::pow(y, p.c() - 1.0) * specfun::hyp2f1_inverse_kernel(p, -y / ch2) *
           specfun::hyp2f1_kernel(p, n, std::sqrt(y));
  };
  spec.tail_exponent = -1.5;
  spec.tail_envelope = transforms::detail::estimate_envelope(g, -1.5);
  return quad::integrate_semi_infinite(g, spec);
}

/// The same integral after y = x^2: 2 int_0^inf x^(2c-1) G(x, u) F_n(x) dx (decay x^(-2)).
inline quad::QuadratureResult lemma1_integral_x(const JacobiParams& p, int n, double u, quad::QuadratureSpec spec) {
  auto g = [&](double x) {
    if (x == 0.0) return 0.0;
    return 2.0 * std::pow(x, 2.0 * p.c() - 1.0) * kernels::inverse_kernel(p, x, u) *
           specfun::hyp2f1_kernel(p, n, x);
  };
  spec.tail_exponent = -2.0;
  spec.tail_envelope = transforms::detail::estimate_envelope(g, -2.0);
  return quad::integrate_semi_infinite(g, spec);
}

inline IdentityReport check_lemma1(const JacobiParams& p, int n, double u,
                                   std::optional<quad::QuadratureSpec> spec = {}) {
  p.require_lemma1();
  kernels::require_index(n);
  if (u == 0.0 || !std::isfinite(u)) throw DomainError("check_lemma1 requires finite u != 0");
  IdentityReport r{IdentityId::lemma1, {p.a(), p.c(), double(n), u, {}, {}}};
  r.rhs = lemma1_rhs(p, n, u);
  r.metric = std::abs(std::sin(n * u)) < detail::sine_zero ? Metric::absolute : Metric::relative;
  const double pre = lemma1_prefactor(p, n);
  auto s = detail::inner_spec(identity_tolerance, r.metric == Metric::absolute ? 0.0 : std::abs(r.rhs));
  s.abs_tol /= pre;
  const auto q = quad::require_converged(lemma1_integral(p, n, u, spec.value_or(s)), "lemma1");
  r.lhs = pre * q.value;
  return detail::finish(r, identity_tolerance);
}

/// pi sin(n u) / (sinh(u) sinh(pi n)).
inline double laplace_k_rhs(int n, double u) {
  return std::exp(std::log(std::numbers::pi) - kernels::log_sinh_pi(n)) * std::sin(n * u) / std::sinh(u);
}

inline IdentityReport check_laplace_k(int n, double u, std::optional<quad::QuadratureSpec> spec = {}) {
  kernels::require_index(n);
  if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("check_laplace_k requires finite u > 0");
  IdentityReport r{IdentityId::laplace_k, {{}, {}, double(n), u, {}, {}}};
  r.rhs = laplace_k_rhs(n, u);
  r.metric = std::abs(std::sin(n * u)) < detail::sine_zero ? Metric::absolute : Metric::relative;
  auto s = spec.value_or(
      detail::inner_spec(identity_tolerance, r.metric == Metric::absolute ? 0.0 : std::abs(r.rhs)));
  s.exponential_decay = true;
  const double ch = std::cosh(u);
  const auto q = quad::require_converged(
      quad::integrate_semi_infinite([&](double x) { return std::exp(-x * ch) * specfun::bessel_k_imag(n, x); }, s),
      "laplace_k");
  r.lhs = q.value;
  return detail::finish(r, identity_tolerance);
}

inline IdentityReport check_bessel_repr(const JacobiParams& p, int n, double x, double tolerance = identity_tolerance,
                                        std::optional<quad::QuadratureSpec> spec = {}) {
  p.require_theorems();
  kernels::require_index(n);
  if (!(x > 0.0)) throw DomainError("check_bessel_repr requires x > 0");
  IdentityReport r{IdentityId::bessel_repr, {p.a(), p.c(), double(n), {}, x, {}}};
  r.lhs = specfun::hyp2f1_kernel_eval(p, n, x, specfun::Hyp2f1Path::automatic).value;
  const double pre = specfun::kernel_bessel_product_prefactor(p, n, x);
  auto s = spec.value_or(detail::inner_spec(tolerance, std::abs(r.lhs) / pre));
  s.max_subdivisions = 20000;
  const auto q = quad::require_converged(specfun::kernel_bessel_product_integral(p, n, x, s), "bessel_repr");
  r.rhs = pre * q.value;
  return detail::finish(r, tolerance);
}

/// 2^(c-1) x^(c-2a) Gamma(c) cosh(u)^(2(c-a)+1) e^(-x cosh u) / Gamma(2(c-a)+1).
inline double hankel_rhs(const JacobiParams& p, double x, double u) {
  const double a = p.a(), c = p.c(), ch = std::cosh(u);
  return std::exp((c - 1.0) * std::numbers::ln2 + (c - 2.0 * a) * std::log(x) + specfun::log_gamma_real(c) +
                  (2.0 * (c - a) + 1.0) * std::log(ch) - x * ch - specfun::log_gamma_real(2.0 * (c - a) + 1.0));
}

inline IdentityReport check_hankel_closed(const JacobiParams& p, double u, double x,
                                          std::optional<quad::QuadratureSpec> spec = {}) {
  if (!(p.c() > std::max(0.0, 2.0 * p.a() - 1.5)))
    throw DomainError("parameter regime violated: requires c > max(0, 2a - 3/2)");
  if (!(p.c() >= 0.5)) throw DomainError("check_hankel_closed requires c >= 1/2 (Bessel order >= -1/2)");
  if (!(x > 0.0)) throw DomainError("check_hankel_closed requires x > 0");
  IdentityReport r{IdentityId::hankel_closed, {p.a(), p.c(), {}, u, x, {}}};
  r.rhs = hankel_rhs(p, x, u);
  quad::QuadratureSpec s;
  s.rel_tol = 1e-8;
  s.abs_tol = 1e-8 * std::abs(r.rhs);
  s = spec.value_or(s);
  const double ch2 = std::cosh(u) * std::cosh(u);
  const double c = p.c();
  const auto q = quad::integrate_bessel_oscillatory(
      [&](double y) { return std::pow(y, c) * specfun::hyp2f1_inverse_kernel(p, -y * y / ch2); }, c - 1.0, x, s);
  r.lhs = q.value;
  return detail::finish(r, hankel_tolerance);
}

/// Checks kernel_bound_ratio(p, n, x, delta) <= envelope, the grid constant B.
inline IdentityReport check_kernel_bound(const JacobiParams& p, int n, double x, double delta, double envelope) {
  if (!(p.c() >= 0.5 && p.c() < 2.0 * p.a() + 0.5))
    throw DomainError("parameter regime violated: requires 1/2 <= c < 2a + 1/2");
  if (!(delta >= 0.0 && delta < std::numbers::pi / 2)) throw DomainError("delta must lie in [0, pi/2)");
  IdentityReport r{IdentityId::kernel_bound, {p.a(), p.c(), double(n), {}, x, delta}};
  r.metric = Metric::bound;
  r.lhs = kernels::kernel_bound_ratio(p, n, x, delta);
  r.rhs = envelope;
  r.residual = std::max(0.0, r.lhs / r.rhs - 1.0);
  r.tolerance = 1e-12;
  r.passed = r.residual <= r.tolerance;
  return r;
}

/// No growth in n: at fixed (x, delta) the largest ratio over the upper half of
/// `ns` does not exceed the largest over the lower half.
inline IdentityReport check_kernel_bound_growth(const JacobiParams& p, double x, double delta,
                                                std::span<const int> ns) {
  if (ns.size() < 2) throw DomainError("growth check needs at least two indices");
  IdentityReport r{IdentityId::kernel_bound, {p.a(), p.c(), {}, {}, x, delta}};
  r.metric = Metric::bound;
  const std::size_t half = ns.size() / 2;
  for (std::size_t i = 0; i < half; ++i) r.rhs = std::max(r.rhs, kernels::kernel_bound_ratio(p, ns[i], x, delta));
  for (std::size_t i = half; i < ns.size(); ++i)
    r.lhs = std::max(r.lhs, kernels::kernel_bound_ratio(p, ns[i], x, delta));
  r.residual = std::max(0.0, r.lhs / r.rhs - 1.0);
  r.tolerance = 0.0;
  r.passed = r.residual <= r.tolerance;
  return r;
}

/// |K_{in}(x)| <= e^(-delta n) K_0(x cos delta).
inline IdentityReport check_k_inequality(double n, double x, double delta) {
  if (!(x > 0.0)) throw DomainError("check_k_inequality requires x > 0");
  if (!(delta >= 0.0 && delta < std::numbers::pi / 2)) throw DomainError("delta must lie in [0, pi/2)");
  IdentityReport r{IdentityId::k_inequality, {{}, {}, n, {}, x, delta}};
  r.metric = Metric::bound;
  r.lhs = std::abs(specfun::bessel_k_imag(n, x));
  r.rhs = std::exp(-delta * n) * specfun::bessel_k_imag(0.0, x * std::cos(delta));
  r.residual = std::max(0.0, r.lhs / r.rhs - 1.0);
  r.tolerance = 1e-12;
  r.passed = r.residual <= r.tolerance;
  return r;
}

/// Empirical C_nu = max over the grid of sqrt(x) |J_nu(x)|.
inline double measure_bessel_envelope(double nu, std::span<const double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::sqrt(x) * std::abs(specfun::bessel_j(nu, x)));
  return m;
}

inline double measure_bessel_envelope(double nu) {
  std::vector<double> xs;
  for (int i = 1; i <= 4000; ++i) xs.push_back(0.025 * i);
  return measure_bessel_envelope(nu, xs);
}

/// Parameter pairs of the default grids.
inline std::vector<JacobiParams> default_params() { return {{0.75, 1.2}, {0.6, 1.0}, {0.9, 1.6}}; }

/// Runs one identity over its default grid, in a fixed order.
inline std::vector<IdentityReport> run_default_grid(IdentityId id) {
  std::vector<IdentityReport> out;
  const auto params = default_params();
  switch (id) {
    case IdentityId::lemma1:
      for (const auto& p : params)
        for (int n : {1, 2, 3})
          for (double u : {0.3, 1.0, 2.0}) out.push_back(check_lemma1(p, n, u));
      break;
    case IdentityId::laplace_k:
      for (int n : {1, 2, 3})
        for (double u : {0.3, 1.0, 2.5}) out.push_back(check_laplace_k(n, u));
      break;
    case IdentityId::bessel_repr:
      for (const auto& p : params)
        for (int n : {1, 2})
          for (double x : {0.5, 1.0, 2.0}) out.push_back(check_bessel_repr(p, n, x));
      break;
    case IdentityId::hankel_closed:
      for (const auto& p : params)
        for (double x : {0.5, 1.0, 3.0})
          for (double u : {0.0, 0.5, 1.0}) out.push_back(check_hankel_closed(p, u, x));
      break;
    case IdentityId::kernel_bound: {
      static constexpr int ns[] = {1, 2, 3, 4, 5, 6};
      static constexpr double xs[] = {0.5, 1.0, 2.0, 5.0};
      for (const auto& p : params)
        for (double delta : {0.0, 0.5}) {
          const double b = kernels::kernel_envelope_constant(p, ns, xs, delta);
          for (int n : ns)
            for (double x : xs) out.push_back(check_kernel_bound(p, n, x, delta, b));
          for (double x : xs) out.push_back(check_kernel_bound_growth(p, x, delta, ns));
        }
      break;
    }
    case IdentityId::k_inequality:
      for (double n : {0.0, 1.0, 2.0, 4.0})
        for (double x : {0.5, 1.0, 2.0})
          for (double delta : {0.0, 0.5, 1.0}) out.push_back(check_k_inequality(n, x, delta));
      break;
  }
  return out;
}

}  // namespace fjt::verify
