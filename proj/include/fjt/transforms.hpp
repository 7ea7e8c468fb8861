#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "fjt/error.hpp"
#include "fjt/kernels.hpp"
#include "fjt/quad/adaptive.hpp"
#include "fjt/specfun.hpp"

namespace fjt::transforms {

/// Coefficients a_1..a_N of the series transform, with the decay budget delta in [0, pi/2).
struct CoefficientSequence {
  std::vector<double> values;
  JacobiParams params;
  double decay_delta = 0.0;

  int size() const { return static_cast<int>(values.size()); }

  /// |a_m| e^(-delta m) / |Gamma(a + i m/2)|^2 for m = 1..N.
  std::vector<double> weighted() const {
    std::vector<double> w(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double m = static_cast<double>(i + 1);
      if (values[i] == 0.0) continue;
      w[i] = std::exp(std::log(std::abs(values[i])) - decay_delta * m - specfun::log_gamma_abs_sq(params.a(), m));
    }
    return w;
  }

  /// Summability proxy: every weighted term finite, and for N >= 8 the mean of
  /// the last quarter of weighted terms is at most half the mean of the rest.
  void validate() const {
    if (!(decay_delta >= 0.0 && decay_delta < std::numbers::pi / 2))
      throw DomainError("decay delta must lie in [0, pi/2)");
    for (double v : values)
      if (!std::isfinite(v)) throw DomainError("coefficients must be finite");
    const auto w = weighted();
    for (double v : w)
      if (!std::isfinite(v)) throw DecayConditionError("weighted coefficient overflows");
    const std::size_t n = w.size();
    if (n < 8) return;
    const std::size_t head = n - n / 4;
    double head_sum = 0.0, tail_sum = 0.0;
    for (std::size_t i = 0; i < head; ++i) head_sum += w[i];
    for (std::size_t i = head; i < n; ++i) tail_sum += w[i];
    const double head_mean = head_sum / static_cast<double>(head);
    const double tail_mean = tail_sum / static_cast<double>(n - head);
    if (!(tail_mean <= 0.5 * head_mean))
      throw DecayConditionError("weighted coefficients do not contract over the last quartile (tail mean " +
                                error_detail::short_number(tail_mean) + ", head mean " +
                                error_detail::short_number(head_mean) + ")");
  }
};

/// a_n = e^(-2n) |Gamma(a + i n/2)|^2, n = 1..N.
inline CoefficientSequence reference_sequence(const JacobiParams& p, int N, double delta = 0.0) {
  if (N < 1) throw DomainError("sequence length must be >= 1");
  CoefficientSequence s{{}, p, delta};
  for (int n = 1; n <= N; ++n) s.values.push_back(std::exp(-2.0 * n + specfun::log_gamma_abs_sq(p.a(), n)));
  return s;
}

inline CoefficientSequence zero_sequence(const JacobiParams& p, int N) {
  if (N < 1) throw DomainError("sequence length must be >= 1");
  return {std::vector<double>(static_cast<std::size_t>(N), 0.0), p, 0.0};
}

/// A real function on (0, inf) with optional algebraic decay rate.
struct RealFunction {
  std::function<double(double)> eval;
  std::optional<double> decay_exponent;
  std::string domain_note;

  double operator()(double x) const { return eval(x); }
};

/// A 2 pi-periodic Lipschitz profile psi. Breakpoints list kinks in [-pi, pi].
struct ProfileFunction {
  std::function<double(double)> psi;
  double lipschitz_constant = 1.0;
  std::vector<double> breakpoints;
  std::string name;

  double operator()(double u) const { return psi(u); }

  /// Sampled Lipschitz and periodicity checks.
  void validate() const {
    if (!(lipschitz_constant > 0.0)) throw LipschitzError("Lipschitz constant must be positive");
    constexpr int grid = 4096;
    constexpr double slack = 1e-9;
    const double pi = std::numbers::pi;
    const double h = 2.0 * pi / grid;
    double prev = psi(-pi);
    for (int i = 1; i <= grid; ++i) {
      const double u = -pi + i * h;
      const double v = psi(u);
      if (!std::isfinite(v)) throw LipschitzError("profile is not finite at u = " + error_detail::short_number(u));
      if (std::abs(v - prev) > lipschitz_constant * h * (1.0 + slack) + slack)
        throw LipschitzError("profile '" + name + "' violates the Lipschitz bound near u = " +
                             error_detail::short_number(u));
      if (std::abs(psi(u + 2.0 * pi) - v) > 1e-12 * (1.0 + std::abs(v)))
        throw LipschitzError("profile '" + name + "' is not 2 pi-periodic at u = " + error_detail::short_number(u));
      prev = v;
    }
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(-pi, pi);
    for (int i = 0; i < 2048; ++i) {
      const double u = dist(rng), v = dist(rng);
      if (u == v) continue;
      if (std::abs(psi(u) - psi(v)) > lipschitz_constant * std::abs(u - v) * (1.0 + slack) + slack)
        throw LipschitzError("profile '" + name + "' violates the Lipschitz bound on a sampled pair");
    }
  }
};

inline std::vector<std::string> profile_names() { return {"sin", "sin+0.3sin3", "ramp"}; }

/// Built-in profiles. "ramp" is the odd trapezoid wave with slope 4/pi,
/// flat at +-1 on pi/4 <= |u| <= 3pi/4.
inline ProfileFunction profile(std::string_view name) {
  const double pi = std::numbers::pi;
  if (name == "sin") return {[](double u) { return std::sin(u); }, 1.0, {}, "sin"};
  if (name == "sin+0.3sin3")
    return {[](double u) { return std::sin(u) + 0.3 * std::sin(3.0 * u); }, 1.9, {}, "sin+0.3sin3"};
  if (name == "ramp")
    return {[](double u) { return std::clamp(std::asin(std::sin(u)) / (std::numbers::pi / 4), -1.0, 1.0); },
            4.0 / pi,
            {-3.0 * pi / 4, -pi / 4, pi / 4, 3.0 * pi / 4},
            "ramp"};
  throw DomainError("unknown profile '" + std::string(name) + "'");
}

namespace detail {

/// 1.5 x max of |g(x)| x^(-s) over one 2 pi period of ln x starting at 32.
template <class G>
double estimate_envelope(G&& g, double s) {
  constexpr int samples = 96;
  constexpr double x0 = 32.0;
  double m = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = std::log(x0) + 2.0 * std::numbers::pi * k / samples;
    const double x = std::exp(t);
    m = std::max(m, std::abs(g(x)) * std::exp(-s * t));
  }
  return 1.5 * m;
}

inline double profile_weight(const JacobiParams& p, double x) {
  return x == 0.0 ? (p.c() == 0.5 ? 1.0 : 0.0) : std::pow(x, 2.0 * p.c() - 1.0);
}

/// Kinks of psi folded onto [0, pi].
inline std::vector<double> folded_breakpoints(const ProfileFunction& psi) {
  std::vector<double> out;
  for (double b : psi.breakpoints) {
    const double r = std::abs(std::remainder(b, 2.0 * std::numbers::pi));
    if (r > 0.0 && r < std::numbers::pi) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline double series_value(const CoefficientSequence& coeffs, double x) {
  quad::detail::CompensatedSum sum;
  for (int n = 1; n <= coeffs.size(); ++n)
    if (coeffs.values[n - 1] != 0.0) sum.add(coeffs.values[n - 1] * kernels::forward_kernel(coeffs.params, n, x));
  return sum.value();
}

}  // namespace detail

struct Synthesis {
  double value;
  /// Bound on the omitted terms m > N: B x^(1/2-c) times the geometric
  /// extrapolation of the weighted tail.
  double tail_bound;
};

/// f(x) = sum_{n=1}^N a_n F_n(x).
inline Synthesis synthesize(const CoefficientSequence& coeffs, double x) {
  coeffs.validate();
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("synthesize requires finite x > 0");
  const auto& p = coeffs.params;
  const double value = detail::series_value(coeffs, x);

  const auto w = coeffs.weighted();
  double tail_sum = 0.0;
  if (w.back() != 0.0) {
    const double r = w.size() >= 2 && w[w.size() - 2] > 0.0 ? w.back() / w[w.size() - 2] : 1.0;
    tail_sum = r < 1.0 ? w.back() * r / (1.0 - r) : INFINITY;
  }
  double bound = 0.0;
  if (tail_sum != 0.0)
    bound = kernels::kernel_envelope_constant(p, coeffs.decay_delta) * std::pow(x, 0.5 - p.c()) * tail_sum;
  return {value, bound};
}

/// The synthesized series as a RealFunction decaying like x^(-2a).
inline RealFunction synthesized_function(const CoefficientSequence& coeffs) {
  coeffs.validate();
  return {[coeffs](double x) {
            if (!(x >= 0.0)) throw DomainError("synthesized function requires x >= 0");
            return detail::series_value(coeffs, x);
          },
          kernel_decay(coeffs.params).exponent_forward, "finite series in F_n"};
}

/// a_n = int_0^inf F_n(x) f(x) dx.
inline quad::QuadratureResult analyze(const RealFunction& f, const JacobiParams& p, int n,
                                      quad::QuadratureSpec spec = {}) {
  kernels::require_index(n);
  auto integrand = [&](double x) { return kernels::forward_kernel(p, n, x) * f(x); };
  if (f.decay_exponent) {
    const double s = *f.decay_exponent + kernel_decay(p).exponent_forward;
    if (!(s < -1.0))
      throw DivergenceError("analyze: composed decay exponent " + error_detail::short_number(s) + " >= -1");
    spec.tail_exponent = s;
    spec.tail_envelope = detail::estimate_envelope(integrand, s);
  }
  return quad::require_converged(quad::integrate_semi_infinite(integrand, spec), "analyze");
}

/// a_n = C_n int_0^inf x^(2c-1) Phi_n(x) f(x) dx with the inversion prefactor C_n.
/// Tolerances in spec apply to the returned coefficient.
inline quad::QuadratureResult invert_coefficients(const RealFunction& f, const JacobiParams& p, int n,
                                                  quad::QuadratureSpec spec = {}) {
  p.require_theorems(Boundary::include);
  const auto norm = kernels::normalization(p, n, Boundary::include);
  const double w = 2.0 * p.c() - 1.0;
  auto integrand = [&](double x) {
    if (x == 0.0) return 0.0;
    return std::pow(x, w) * kernels::phi_kernel(p, n, x) * f(x);
  };
  spec.abs_tol /= norm.theorem1_prefactor;
  if (f.decay_exponent) {
    const double s = w + kernel_decay(p).exponent_inverse + *f.decay_exponent;
    if (!(s < -1.0))
      throw DivergenceError("invert_coefficients: composed decay exponent " + error_detail::short_number(s) + " >= -1");
    spec.tail_exponent = s;
    spec.tail_envelope = detail::estimate_envelope(integrand, s);
  }
  auto r = quad::require_converged(quad::integrate_semi_infinite(integrand, spec), "invert_coefficients");
  r.value *= norm.theorem1_prefactor;
  r.error_estimate *= norm.theorem1_prefactor;
  return r;
}

/// f(x) = x^(2c-1) int_{-pi}^{pi} G(x,u) psi(u) sinh(u) / cosh(u)^(2(c-a)+1) du,
/// decaying like x^(2a-2). Only the odd part of psi contributes.
inline RealFunction build_profile_function(const ProfileFunction& psi, const JacobiParams& p,
                                           const quad::QuadratureSpec& spec = {}) {
  p.require_theorems(Boundary::include);
  psi.validate();
  quad::QuadratureSpec inner = spec;
  inner.rel_tol = std::min(1e-11, spec.rel_tol / 100.0);
  inner.abs_tol = std::min(1e-14, spec.abs_tol / 100.0);
  auto eval = [psi, p, inner, kinks = detail::folded_breakpoints(psi)](double x) {
    if (!(x >= 0.0)) throw DomainError("profile function requires x >= 0");
    const double e = 2.0 * (p.a() - p.c());
    auto g = [&](double u) {
      const double odd = 0.5 * (psi(u) - psi(-u));
      return kernels::inverse_kernel(p, x, u) * odd * std::tanh(u) * std::pow(std::cosh(u), e);
    };
    const auto r = quad::integrate_finite(g, 0.0, std::numbers::pi, inner, kinks);
    quad::require_converged(r, "profile function");
    return 2.0 * detail::profile_weight(p, x) * r.value;
  };
  return {eval, 2.0 * p.a() - 2.0, "profile function of '" + psi.name + "'"};
}

/// a_n = K_n int_{-pi}^{pi} psi(u) sin(n u) du with
/// K_n = 4^(c-a) pi Gamma(c)^2 / (Gamma(2(c-a)+1) sinh(pi n) |Gamma(a+in/2)|^2).
inline quad::QuadratureResult closed_form_coefficients(const ProfileFunction& psi, const JacobiParams& p, int n,
                                                       quad::QuadratureSpec spec = {}) {
  const auto norm = kernels::normalization(p, n, Boundary::include);
  spec.abs_tol /= norm.closed_coeff_prefactor;
  auto g = [&](double u) { return psi(u) * std::sin(n * u); };
  auto r = quad::integrate_finite(g, -std::numbers::pi, std::numbers::pi, spec, psi.breakpoints);
  quad::require_converged(r, "closed_form_coefficients");
  r.value *= norm.closed_coeff_prefactor;
  r.error_estimate *= norm.closed_coeff_prefactor;
  return r;
}

struct Reconstruction {
  double value = 0.0;
  std::vector<double> terms;
  /// Set when the last term exceeds 10% of the partial sum.
  std::optional<std::string> warning;
};

/// x^(2c-1) sum_{n=1}^N T sinh(pi n) |Gamma(a+in/2)|^2 Phi_n(x) a_n, T the reconstruction prefactor.
inline Reconstruction reconstruct(const CoefficientSequence& coeffs, const JacobiParams& p, double x, int N,
                                  const quad::QuadratureSpec& spec = {}) {
  p.require_theorems(Boundary::include);
  if (N < 1) throw DomainError("reconstruct requires N >= 1");
  if (N > coeffs.size()) throw DomainError("reconstruct: N exceeds the number of coefficients");
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("reconstruct requires finite x >= 0");

  Reconstruction out;
  quad::detail::CompensatedSum sum;
  const double log_weight = x == 0.0 ? 0.0 : (2.0 * p.c() - 1.0) * std::log(x);
  const double weight = detail::profile_weight(p, x);
  for (int n = 1; n <= N; ++n) {
    const double a_n = coeffs.values[n - 1];
    double term = 0.0;
    if (a_n != 0.0 && weight != 0.0) {
      const auto norm = kernels::normalization(p, n, Boundary::include);
      kernels::PhiKernelRequest req{p, n, x};
      req.spec.rel_tol = std::min(req.spec.rel_tol, spec.rel_tol);
      const double phi = kernels::phi_kernel(req);
      if (phi != 0.0) {
        const double log_mag = norm.log_theorem1 + std::log(std::abs(a_n)) + std::log(std::abs(phi)) + log_weight;
        if (!(log_mag < 709.0))
          throw OverflowError("reconstruct: term " + std::to_string(n) +
                              " overflows; coefficients lie outside the admissible class");
        term = std::copysign(std::exp(log_mag), a_n * phi);
      }
    }
    out.terms.push_back(term);
    sum.add(term);
  }
  out.value = sum.value();
  if (N >= 2 && std::abs(out.terms.back()) > 0.1 * std::abs(out.value))
    out.warning = "last term exceeds 10% of the partial sum; N may be too small";
  return out;
}

}  // namespace fjt::transforms
