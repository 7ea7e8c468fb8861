#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include "fjt/error.hpp"
#include "fjt/quad/rules.hpp"

namespace fjt::specfun {

/// J_nu(x) for nu >= -1/2 and x > 0.
inline double bessel_j(double nu, double x) {
  if (!(nu >= -0.5)) throw DomainError("bessel_j requires nu >= -1/2");
  if (!(x > 0.0)) throw DomainError("bessel_j requires x > 0");
  return boost::math::cyl_bessel_j(nu, x);
}

/// McMahon's large-k expansion of the k-th positive zero of J_nu.
inline double bessel_j_zero_mcmahon(double nu, int k) {
  const double mu = 4.0 * nu * nu;
  const double beta = (k + 0.5 * nu - 0.25) * std::numbers::pi;
  const double b8 = 8.0 * beta;
  return beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * std::pow(b8, 3)) -
         32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * std::pow(b8, 5));
}

/// k-th positive zero of J_nu (k >= 1): McMahon start, Newton polish.
inline double bessel_j_zero(double nu, int k) {
  if (k < 1) throw DomainError("bessel_j_zero requires k >= 1");
  double x = bessel_j_zero_mcmahon(nu, k);
  for (int it = 0; it < 30; ++it) {
    const double step = boost::math::cyl_bessel_j(nu, x) / boost::math::cyl_bessel_j_prime(nu, x);
    x -= step;
    if (std::abs(step) <= 1e-15 * x) break;
  }
  return x;
}

/// K_{i n}(x), the modified Bessel function of purely imaginary order i n,
/// from the cosine representation
///   K_{in}(x) = int_0^inf exp(-x cosh t) cos(n t) dt,
/// truncated where x (cosh t - 1) = 745 and summed with 20-point
/// Gauss-Legendre panels. Even in n.
inline double bessel_k_imag(double n, double x) {
  if (!(x > 0.0)) throw DomainError("bessel_k_imag requires x > 0");
  if (!std::isfinite(n)) throw DomainError("bessel_k_imag requires finite order");
  n = std::abs(n);

  constexpr double cutoff = 745.0;
  const double t_max = std::acosh(1.0 + cutoff / x);
  // panel edges where the scaled exponent x (cosh t - 1) crosses these levels
  constexpr double levels[] = {1.0 / 64, 1.0 / 16, 0.25, 1.0, 4.0, 16.0, 64.0, 256.0};
  const double max_width = 3.0 / std::max(1.0, n);

  auto integrand = [&](double t) {
    const double s = std::sinh(0.5 * t);
    return std::exp(-2.0 * x * s * s) * std::cos(n * t);
  };

  double sum = 0.0;
  double lo = 0.0;
  auto add_span = [&](double hi) {
    const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width)));
    const double h = (hi - lo) / pieces;
    for (int i = 0; i < pieces; ++i)
      sum += quad::gauss_legendre_panel<20>(integrand, lo + i * h, lo + (i + 1) * h);
    lo = hi;
  };
  for (double level : levels) {
    const double t = std::acosh(1.0 + level / x);
    if (t > lo && t < t_max) add_span(t);
  }
  add_span(t_max);
  return std::exp(-x) * sum;
}

}  // namespace fjt::specfun
