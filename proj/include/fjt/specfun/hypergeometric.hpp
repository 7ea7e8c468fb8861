#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "fjt/error.hpp"
#include "fjt/quad/adaptive.hpp"
#include "fjt/specfun/bessel.hpp"
#include "fjt/specfun/gamma.hpp"
#include "fjt/specfun/params.hpp"

namespace fjt::specfun {

/// Evaluation route taken for 2F1(A, B; C; z) on the negative real axis.
enum class Hyp2f1Path {
  automatic,
  direct_series,          // |z| <= 1/2
  pfaff_series,           // z -> z/(z-1), mapped argument <= 0.9
  reciprocal_connection,  // z -> 1/z connection formula, |z| > 9
  bessel_product,         // quadrature of the Bessel-product representation
  small_index_extrapolation,  // n ~ 0 with |z| > 9: interpolation in n^2
};

inline const char* to_string(Hyp2f1Path p) {
  switch (p) {
    case Hyp2f1Path::automatic: return "automatic";
    case Hyp2f1Path::direct_series: return "direct_series";
    case Hyp2f1Path::pfaff_series: return "pfaff_series";
    case Hyp2f1Path::reciprocal_connection: return "reciprocal_connection";
    case Hyp2f1Path::bessel_product: return "bessel_product";
    case Hyp2f1Path::small_index_extrapolation: return "small_index_extrapolation";
  }
  return "?";
}

/// A kernel value together with how it was obtained.
struct Hyp2f1Evaluation {
  double value;
  /// |Im| of the complex accumulation relative to its magnitude scale.
  double imaginary_residue;
  Hyp2f1Path path;
  int terms;
};

namespace detail {

using cplx = std::complex<double>;

inline constexpr double direct_limit = 0.5;
inline constexpr double pfaff_limit = 9.0;  // |z| <= 9  <=>  z/(z-1) <= 0.9
inline constexpr double degenerate_gap = 1e-4;
inline constexpr double max_imaginary_residue = 1e-12;

template <class T>
struct SeriesSum {
  T value;
  double scale;  // sum of |terms|
  int terms;
};

/// Gauss series sum_k (A)_k (B)_k / ((C)_k k!) z^k for |z| < 1.
template <class T>
SeriesSum<T> gauss_series(T A, T B, T C, double z, int max_terms = 200000) {
  constexpr double eps = 1e-17;
  T term = 1.0;
  T sum = 1.0;
  double scale = 1.0;
  int quiet = 0;
  for (int k = 0; k < max_terms; ++k) {
    const T denom = (C + double(k)) * double(k + 1);
    if (std::abs(C + double(k)) == 0.0) throw DomainError("2F1 series: C is a non-positive integer");
    const T ratio = (A + double(k)) * (B + double(k)) / denom * z;
    term *= ratio;
    sum += term;
    scale += std::abs(term);
    if (std::abs(term) == 0.0) return {sum, scale, k + 1};
    // geometric bound on the remaining terms
    const double r = std::max(std::abs(ratio), std::abs(z));
    const double tail = r < 1.0 ? std::abs(term) * r / (1.0 - r) : INFINITY;
    if (tail <= eps * std::abs(sum) || tail <= 1e-3 * eps * scale) {
      if (++quiet >= 3) return {sum, scale, k + 1};
    } else {
      quiet = 0;
    }
  }
  throw NonConvergenceError("2F1 series did not converge in " + std::to_string(max_terms) + " terms",
                            std::abs(term) / std::max(std::abs(sum), 1e-300));
}

template <class T>
struct ComplexEval {
  cplx value;
  double scale;
  int terms;
};

template <class T>
ComplexEval<T> direct(T A, T B, double C, double z) {
  const auto s = gauss_series<T>(A, B, T(C), z);
  return {cplx(s.value), s.scale, s.terms};
}

template <class T>
ComplexEval<T> pfaff(T A, T B, double C, double z) {
  // 2F1(A,B;C;z) = (1-z)^(-A) 2F1(A, C-B; C; z/(z-1))
  const double w = z / (z - 1.0);
  const auto s = gauss_series<T>(A, T(C) - B, T(C), w);
  const cplx pre = std::exp(-cplx(A) * std::log(1.0 - z));
  return {pre * cplx(s.value), std::abs(pre) * s.scale, s.terms};
}

inline bool near_integer(cplx v) {
  return std::abs(v.imag()) < degenerate_gap && std::abs(v.real() - std::round(v.real())) < degenerate_gap;
}

/// 1/z connection formula, valid for z < -1 when B - A is not an integer.
template <class T>
std::optional<ComplexEval<T>> reciprocal(T A, T B, double C, double z) {
  const cplx a(A), b(B), c(C);
  if (near_integer(b - a)) return std::nullopt;
  const double log_mz = std::log(-z);
  const double inv = 1.0 / z;

  auto branch = [&](cplx p, cplx q, T P, T Q) -> std::pair<cplx, double> {
    // Gamma(C) Gamma(q-p) / (Gamma(q) Gamma(C-p)) (-z)^(-p) 2F1(p, p-C+1; p-q+1; 1/z)
    if (is_nonpositive_integer(c - p) || is_nonpositive_integer(q)) return {0.0, 0.0};
    const cplx log_coef = log_gamma(c) + log_gamma(q - p) - log_gamma(q) - log_gamma(c - p) - p * log_mz;
    const auto s = gauss_series<T>(P, P - T(C) + 1.0, P - Q + 1.0, inv);
    const cplx pre = std::exp(log_coef);
    return {pre * cplx(s.value), std::abs(pre) * s.scale};
  };
  const auto [t1, s1] = branch(a, b, A, B);
  const auto [t2, s2] = branch(b, a, B, A);
  return ComplexEval<T>{t1 + t2, s1 + s2, 0};
}

template <class T>
std::optional<ComplexEval<T>> dispatch(T A, T B, double C, double z, Hyp2f1Path path, Hyp2f1Path& used) {
  if (path == Hyp2f1Path::automatic) {
    const double az = std::abs(z);
    path = az <= direct_limit  ? Hyp2f1Path::direct_series
           : az <= pfaff_limit ? Hyp2f1Path::pfaff_series
                               : Hyp2f1Path::reciprocal_connection;
  }
  used = path;
  switch (path) {
    case Hyp2f1Path::direct_series:
      if (std::abs(z) >= 1.0) throw DomainError("direct 2F1 series requires |z| < 1");
      return direct(A, B, C, z);
    case Hyp2f1Path::pfaff_series:
      return pfaff(A, B, C, z);
    case Hyp2f1Path::reciprocal_connection:
      if (!(z < -1.0)) throw DomainError("1/z connection requires z < -1");
      return reciprocal(A, B, C, z);
    case Hyp2f1Path::small_index_extrapolation:
      if (near_integer(cplx(B) - cplx(A))) return std::nullopt;
      return reciprocal(A, B, C, z);
    default:
      throw DomainError(std::string("2F1 path not available here: ") + to_string(path));
  }
}

inline double checked_real(cplx v, double scale, double& residue) {
  residue = scale > 0.0 ? std::abs(v.imag()) / scale : 0.0;
  if (residue > max_imaginary_residue)
    throw NonConvergenceError("2F1 kernel: imaginary residue above 1e-12", residue);
  return v.real();
}

}  // namespace detail

/// Bessel-product integral int_0^inf y^(2a-c) J_{c-1}(x y) K_{in}(y) dy.
/// Requires c >= 1/2 (order c - 1 >= -1/2) and x > 0.
inline quad::QuadratureResult kernel_bessel_product_integral(const JacobiParams& p, double n, double x,
                                                             const quad::QuadratureSpec& spec) {
  if (!(x > 0.0)) throw DomainError("Bessel-product representation requires x > 0");
  const double a = p.a(), c = p.c();
  quad::QuadratureSpec s = spec;
  s.exponential_decay = true;
  s.tail_exponent.reset();
  return quad::integrate_semi_infinite(
      [&](double y) { return std::pow(y, 2.0 * a - c) * bessel_j(c - 1.0, x * y) * bessel_k_imag(n, y); }, s);
}

/// Prefactor 2^(1+c-2a) x^(1-c) Gamma(c) / |Gamma(a + i n/2)|^2 of the Bessel-product representation.
inline double kernel_bessel_product_prefactor(const JacobiParams& p, double n, double x) {
  const double a = p.a(), c = p.c();
  return std::exp((1.0 + c - 2.0 * a) * std::log(2.0) + (1.0 - c) * std::log(x) + log_gamma_real(c) -
                  log_gamma_abs_sq(a, n));
}

/// 2F1(a + i n/2, a - i n/2; c; -x^2) with the route and residue diagnostics.
inline Hyp2f1Evaluation hyp2f1_kernel_eval(const JacobiParams& p, double n, double x,
                                           Hyp2f1Path path = Hyp2f1Path::automatic) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("hyp2f1_kernel requires finite x >= 0");
  if (!std::isfinite(n)) throw DomainError("hyp2f1_kernel requires finite n");
  n = std::abs(n);
  if (x == 0.0) return {1.0, 0.0, Hyp2f1Path::direct_series, 0};

  const double z = -x * x;
  const detail::cplx A(p.a(), 0.5 * n), B(p.a(), -0.5 * n);

  if (path == Hyp2f1Path::bessel_product) {
    if (p.c() < 0.5) throw DomainError("Bessel-product representation requires c >= 1/2");
    quad::QuadratureSpec spec;
    spec.rel_tol = 1e-11;
    spec.abs_tol = 1e-300;
    spec.max_subdivisions = 20000;
    const auto r = kernel_bessel_product_integral(p, n, x, spec);
    if (!r.converged)
      throw NonConvergenceError("hyp2f1_kernel: Bessel-product quadrature", r.error_estimate / std::abs(r.value));
    return {kernel_bessel_product_prefactor(p, n, x) * r.value, 0.0, Hyp2f1Path::bessel_product, 0};
  }

  Hyp2f1Path used = path;
  if (auto r = detail::dispatch(A, B, p.c(), z, path, used)) {
    double residue = 0.0;
    const double v = detail::checked_real(r->value, r->scale, residue);
    return {v, residue, used, r->terms};
  }
  if (path != Hyp2f1Path::automatic && path != Hyp2f1Path::small_index_extrapolation)
    throw NonConvergenceError("1/z connection degenerates for n near 0", 0.0);

  // n ~ 0 with |z| > 9: the kernel is even and entire in n, so interpolate in
  // s = n^2 through the nodes n_j = j h, j = 1..4, where the connection formula is regular.
  constexpr double h = 0.003;
  const double s = n * n;
  double value = 0.0, residue = 0.0;
  for (int j = 1; j <= 4; ++j) {
    const double sj = (j * h) * (j * h);
    double weight = 1.0;
    for (int k = 1; k <= 4; ++k) {
      if (k == j) continue;
      const double sk = (k * h) * (k * h);
      weight *= (s - sk) / (sj - sk);
    }
    const auto e = hyp2f1_kernel_eval(p, j * h, x, Hyp2f1Path::reciprocal_connection);
    value += weight * e.value;
    residue = std::max(residue, e.imaginary_residue);
  }
  return {value, residue, Hyp2f1Path::small_index_extrapolation, 0};
}

/// Forward kernel 2F1(a + i n/2, a - i n/2; c; -x^2); real for real n, equal to 1 at x = 0.
inline double hyp2f1_kernel(const JacobiParams& p, double n, double x) {
  return hyp2f1_kernel_eval(p, n, x).value;
}

/// Inverse kernel 2F1(c - a + 1/2, c - a + 1; c; z) for z <= 0.
inline Hyp2f1Evaluation hyp2f1_inverse_kernel_eval(const JacobiParams& p, double z,
                                                   Hyp2f1Path path = Hyp2f1Path::automatic) {
  if (!(z <= 0.0) || !std::isfinite(z)) throw DomainError("hyp2f1_inverse_kernel requires finite z <= 0");
  if (z == 0.0) return {1.0, 0.0, Hyp2f1Path::direct_series, 0};
  const double A = p.c() - p.a() + 0.5, B = p.c() - p.a() + 1.0;
  Hyp2f1Path used = path;
  // B - A = 1/2, so the connection formula never degenerates
  const auto r = detail::dispatch(A, B, p.c(), z, path, used);
  return {r->value.real(), 0.0, used, r->terms};
}

inline double hyp2f1_inverse_kernel(const JacobiParams& p, double z) {
  return hyp2f1_inverse_kernel_eval(p, z).value;
}

}  // namespace fjt::specfun
