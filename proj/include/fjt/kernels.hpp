#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <span>
#include <unordered_map>

#include "fjt/error.hpp"
#include "fjt/quad/adaptive.hpp"
#include "fjt/specfun.hpp"

namespace fjt::kernels {

inline void require_index(int n) {
  if (n < 1) throw DomainError("kernel index n must be a positive integer (got " + std::to_string(n) + ")");
}

/// F_n(x) = 2F1(a + i n/2, a - i n/2; c; -x^2).
inline double forward_kernel(const JacobiParams& p, int n, double x) {
  require_index(n);
  return specfun::hyp2f1_kernel(p, n, x);
}

/// G(x, u) = 2F1(c - a + 1/2, c - a + 1; c; -x^2 / cosh^2 u). Even in u.
inline double inverse_kernel(const JacobiParams& p, double x, double u) {
  if (!(x >= 0.0)) throw DomainError("inverse_kernel requires x >= 0");
  const double ratio = x / std::cosh(u);
  return specfun::hyp2f1_inverse_kernel(p, -ratio * ratio);
}

struct PhiKernelRequest {
  JacobiParams params;
  int n;
  double x;
  quad::QuadratureSpec spec = default_spec();

  static quad::QuadratureSpec default_spec() {
    quad::QuadratureSpec s;
    s.rel_tol = 1e-10;
    s.abs_tol = 1e-14;
    return s;
  }
};

/// Integrand of Phi_n: G(x, u) tanh(u) sin(n u) cosh(u)^(2(a-c)).
inline double phi_integrand(const JacobiParams& p, double n, double x, double u) {
  return inverse_kernel(p, x, u) * std::tanh(u) * std::sin(n * u) * std::pow(std::cosh(u), 2.0 * (p.a() - p.c()));
}

namespace detail {

inline int phi_panel_count(int n) { return std::max(16, 4 * n); }

struct PhiValue {
  double value;
  double error;
  double magnitude;  // integral of |integrand|
};

/// Fixed composite Gauss-Kronrod 15 mesh with the embedded Gauss error estimate.
inline PhiValue phi_mesh(const JacobiParams& p, double n, double x, double lo, double hi, int panels) {
  auto f = [&](double u) { return phi_integrand(p, n, x, u); };
  const double h = (hi - lo) / panels;
  quad::detail::CompensatedSum value, error, magnitude;
  for (int i = 0; i < panels; ++i) {
    const double a = lo + i * h;
    const double b = i + 1 == panels ? hi : a + h;
    const auto seg = quad::detail::gk15(f, a, b);
    value.add(seg.value);
    error.add(seg.error);
    magnitude.add(seg.magnitude);
  }
  return {value.value(), error.value(), magnitude.value()};
}

inline void check_phi(const PhiValue& v, const PhiKernelRequest& req) {
  const double tol = std::max(req.spec.abs_tol, req.spec.rel_tol * v.magnitude);
  if (!(v.error <= tol))
    throw NonConvergenceError("phi_kernel: mesh error estimate above tolerance at n=" + std::to_string(req.n) +
                                  ", x=" + error_detail::short_number(req.x),
                              v.error);
}

}  // namespace detail

/// Thread-safe memo of Phi_n(x) keyed by the exact bits of (a, c, n, x).
/// Values are deterministic, so concurrent writers store identical values.
class PhiCache {
 public:
  struct Key {
    std::uint64_t a, c, x;
    int n;
    bool operator==(const Key&) const = default;
  };

  static Key key(const JacobiParams& p, int n, double x) {
    return {std::bit_cast<std::uint64_t>(p.a()), std::bit_cast<std::uint64_t>(p.c()),
            std::bit_cast<std::uint64_t>(x), n};
  }

  bool lookup(const Key& k, double& out) const {
    std::shared_lock lock(mutex_);
    const auto it = map_.find(k);
    if (it == map_.end()) return false;
    out = it->second;
    return true;
  }

  void store(const Key& k, double v) {
    std::unique_lock lock(mutex_);
    if (map_.size() >= capacity) map_.clear();
    map_[k] = v;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return map_.size();
  }

  void clear() {
    std::unique_lock lock(mutex_);
    map_.clear();
  }

  static constexpr std::size_t capacity = std::size_t{1} << 21;

 private:
  struct Hash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = k.a * 0x9E3779B97F4A7C15ULL;
      h ^= k.c + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
      h ^= k.x + 0x94D049BB133111EBULL + (h << 6) + (h >> 2);
      h ^= static_cast<std::uint64_t>(k.n) + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };

  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, double, Hash> map_;
};

inline PhiCache& phi_cache() {
  static PhiCache cache;
  return cache;
}

/// Phi_n(x) = int_{-pi}^{pi} G(x,u) tanh(u) sin(nu) cosh(u)^(2(a-c)) du,
/// evaluated as twice the integral over [0, pi] (the integrand is even in u).
inline double phi_kernel(const PhiKernelRequest& req) {
  req.params.require_theorems(Boundary::include);
  require_index(req.n);
  if (!(req.x >= 0.0) || !std::isfinite(req.x)) throw DomainError("phi_kernel requires finite x >= 0");

  auto& cache = phi_cache();
  const auto k = PhiCache::key(req.params, req.n, req.x);
  double cached = 0.0;
  if (cache.lookup(k, cached)) return cached;

  const auto v = detail::phi_mesh(req.params, req.n, req.x, 0.0, std::numbers::pi, detail::phi_panel_count(req.n));
  detail::check_phi(v, req);
  const double value = 2.0 * v.value;
  cache.store(k, value);
  return value;
}

inline double phi_kernel(const JacobiParams& p, int n, double x) { return phi_kernel(PhiKernelRequest{p, n, x}); }

/// Phi_n(x) integrated over the full [-pi, pi] range (no parity reduction, no cache).
inline double phi_kernel_full_range(const PhiKernelRequest& req) {
  req.params.require_theorems(Boundary::include);
  require_index(req.n);
  const auto v = detail::phi_mesh(req.params, req.n, req.x, -std::numbers::pi, std::numbers::pi,
                                  2 * detail::phi_panel_count(req.n));
  detail::check_phi(v, req);
  return v.value;
}

/// Prefactors of the inversion formulas and of the closed-form coefficients, for one n.
///
///  theorem1_prefactor     4^(a-c) Gamma(2(c-a)+1) |Gamma(a+in/2)|^2 sinh(pi n) / (pi Gamma(c))^2
///  theorem2_prefactor     4^(a-c) Gamma(2(c-a)+1) / (pi Gamma(c))^2       (n-independent; the
///                         series multiplies it by sinh(pi n) |Gamma(a+in/2)|^2 x^(2c-1))
///  closed_coeff_prefactor 4^(c-a) pi Gamma(c)^2 / (Gamma(2(c-a)+1) sinh(pi n) |Gamma(a+in/2)|^2)
///
/// theorem1 * closed_coeff = 1/pi for every n.
struct NormalizationConstants {
  double theorem1_prefactor;
  double theorem2_prefactor;
  double closed_coeff_prefactor;
  double log_theorem1;
  double log_theorem2;
  double log_closed_coeff;
};

/// ln sinh(pi n) for n > 0 without overflow.
inline double log_sinh_pi(double n) {
  const double t = std::numbers::pi * n;
  return t + std::log1p(-std::exp(-2.0 * t)) - std::numbers::ln2;
}

inline NormalizationConstants normalization(const JacobiParams& p, int n, Boundary boundary = Boundary::exclude) {
  p.require_theorems(boundary);
  require_index(n);
  const double a = p.a(), c = p.c();
  const double log_common = (a - c) * std::log(4.0) + specfun::log_gamma_real(2.0 * (c - a) + 1.0) -
                            2.0 * std::log(std::numbers::pi) - 2.0 * specfun::log_gamma_real(c);
  const double log_index = specfun::log_gamma_abs_sq(a, n) + log_sinh_pi(n);

  NormalizationConstants out{};
  out.log_theorem2 = log_common;
  out.log_theorem1 = log_common + log_index;
  out.log_closed_coeff = -log_common - log_index - std::log(std::numbers::pi);

  constexpr double limit = 709.0;
  for (double l : {out.log_theorem1, out.log_theorem2, out.log_closed_coeff})
    if (!(std::abs(l) < limit))
      throw OverflowError("normalization constant out of double range at n=" + std::to_string(n));
  out.theorem1_prefactor = std::exp(out.log_theorem1);
  out.theorem2_prefactor = std::exp(out.log_theorem2);
  out.closed_coeff_prefactor = std::exp(out.log_closed_coeff);
  return out;
}

/// Decay exponent of F_n measured at x from phase-matched samples one period
/// P = 2 pi / n of the log-oscillation apart: ln(sum F(t e^P)^2 / sum F(t)^2) / (2P)
/// over t = x e^(jP/m), j < m.
inline double forward_decay_exponent(const JacobiParams& p, int n, double x, int samples = 16) {
  require_index(n);
  if (!(x > 0.0)) throw DomainError("forward_decay_exponent requires x > 0");
  const double period = 2.0 * std::numbers::pi / n;
  double near = 0.0, far = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double t = x * std::exp(period * j / samples);
    const double f0 = forward_kernel(p, n, t), f1 = forward_kernel(p, n, t * std::exp(period));
    near += f0 * f0;
    far += f1 * f1;
  }
  return std::log(far / near) / (2.0 * period);
}

/// log2 |g(2x) / g(x)| for the non-oscillating Phi_n.
inline double phi_doubling_exponent(const JacobiParams& p, int n, double x) {
  return std::log2(std::abs(phi_kernel(p, n, 2.0 * x) / phi_kernel(p, n, x)));
}

/// |F_n(x)| x^(c-1/2) e^(delta n) |Gamma(a+in/2)|^2, the ratio bounded by the kernel envelope.
inline double kernel_bound_ratio(const JacobiParams& p, int n, double x, double delta) {
  require_index(n);
  if (!(x > 0.0)) throw DomainError("kernel_bound_ratio requires x > 0");
  const double log_scale = (p.c() - 0.5) * std::log(x) + delta * n + specfun::log_gamma_abs_sq(p.a(), n);
  return std::abs(forward_kernel(p, n, x)) * std::exp(log_scale);
}

/// Empirical envelope constant B with |F_n(x)| <= B x^(1/2-c) e^(-delta n) / |Gamma(a+in/2)|^2
/// over the given grid (the grid maximum of kernel_bound_ratio).
inline double kernel_envelope_constant(const JacobiParams& p, std::span<const int> ns, std::span<const double> xs,
                                       double delta = 0.0) {
  double b = 0.0;
  for (int n : ns)
    for (double x : xs) b = std::max(b, kernel_bound_ratio(p, n, x, delta));
  return b;
}

inline double kernel_envelope_constant(const JacobiParams& p, double delta = 0.0) {
  static constexpr int ns[] = {1, 2, 3, 4, 5, 6};
  static constexpr double xs[] = {0.5, 1.0, 2.0, 5.0};
  return kernel_envelope_constant(p, ns, xs, delta);
}

}  // namespace fjt::kernels
