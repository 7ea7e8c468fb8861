#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "fjt/error.hpp"

namespace fjt::specfun {

namespace detail {

// Lanczos approximation, g = 607/128 with 15 coefficients (Godfrey).
inline constexpr double lanczos_g = 607.0 / 128.0;
inline constexpr std::array<double, 15> lanczos_coef = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5};

inline constexpr double half_log_two_pi = 0.91893853320467274178032973640562;

template <class T>
T lanczos_log_gamma(T z) {
  // ln Gamma(z) for Re z >= 1/2
  z -= 1.0;
  T series = lanczos_coef[0];
  for (std::size_t k = 1; k < lanczos_coef.size(); ++k) series += lanczos_coef[k] / (z + double(k));
  const T t = z + lanczos_g + 0.5;
  return half_log_two_pi + (z + 0.5) * std::log(t) - t + std::log(series);
}

/// log(sin(pi z)) without overflow for large |Im z|; the branch is arbitrary.
inline std::complex<double> log_sin_pi(std::complex<double> z) {
  using namespace std::complex_literals;
  constexpr double pi = std::numbers::pi;
  if (std::abs(z.imag()) < 20.0) return std::log(std::sin(pi * z));
  if (z.imag() > 0.0)
    return -1.0i * pi * z + std::log(0.5i) + std::log(1.0 - std::exp(2.0i * pi * z));
  return 1.0i * pi * z + std::log(-0.5i) + std::log(1.0 - std::exp(-2.0i * pi * z));
}

}  // namespace detail

inline bool is_nonpositive_integer(std::complex<double> z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

/// Principal-ish complex log-gamma: exp(log_gamma(z)) == Gamma(z) and
/// Re log_gamma(z) == ln|Gamma(z)|; the imaginary part is not branch-continuous.
inline std::complex<double> log_gamma(std::complex<double> z) {
  if (is_nonpositive_integer(z)) throw DomainError("log_gamma: pole at non-positive integer");
  if (z.real() >= 0.5) return detail::lanczos_log_gamma(z);
  return std::log(std::numbers::pi) - detail::log_sin_pi(z) - detail::lanczos_log_gamma(1.0 - z);
}

inline std::complex<double> gamma(std::complex<double> z) { return std::exp(log_gamma(z)); }

/// ln Gamma(x) for x > 0.
inline double log_gamma_real(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma_real requires x > 0");
  if (x >= 0.5) return detail::lanczos_log_gamma(x);
  return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - detail::lanczos_log_gamma(1.0 - x);
}

/// ln |Gamma(a + i n/2)|^2, the log-space form of gamma_abs_sq.
inline double log_gamma_abs_sq(double a, double n) {
  if (!(a > 0.0)) throw DomainError("gamma_abs_sq requires a > 0");
  if (n == 0.0) return 2.0 * log_gamma_real(a);
  return 2.0 * log_gamma(std::complex<double>(a, 0.5 * n)).real();
}

/// |Gamma(a + i n/2)|^2 for a > 0.
inline double gamma_abs_sq(double a, double n) { return std::exp(log_gamma_abs_sq(a, n)); }

}  // namespace fjt::specfun
