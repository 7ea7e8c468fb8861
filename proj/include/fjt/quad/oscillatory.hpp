#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fjt/error.hpp"
#include "fjt/quad/adaptive.hpp"
#include "fjt/specfun/bessel.hpp"

namespace fjt::quad {

namespace detail {

/// Repeated pairwise averaging of a run of partial sums down to one value.
inline double iterated_average(std::vector<double> row) {
  while (row.size() > 1) {
    for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
    row.pop_back();
  }
  return row.front();
}

}  // namespace detail

/// int_0^inf envelope(y) J_nu(omega y) dy for a smooth, algebraically decaying
/// envelope. The range is cut at the zeros of J_nu(omega y); partial sums over
/// whole half-periods are accelerated by iterated averaging.
template <class F>
QuadratureResult integrate_bessel_oscillatory(F&& envelope, double nu, double omega, const QuadratureSpec& spec) {
  spec.validate();
  if (!(omega > 0.0)) throw DomainError("integrate_bessel_oscillatory requires omega > 0");
  if (!(nu >= -0.5)) throw DomainError("integrate_bessel_oscillatory requires nu >= -1/2");

  constexpr int levels = 12;
  constexpr int first_batch = 24;
  constexpr int batch = 8;
  constexpr int max_panels = 4000;

  auto integrand = [&](double y) { return envelope(y) * specfun::bessel_j(nu, omega * y); };
  QuadratureSpec panel = spec;
  panel.rel_tol = spec.rel_tol / 10.0;
  panel.abs_tol = spec.abs_tol / 100.0;

  QuadratureResult out;
  std::vector<double> partial;
  double panel_error = 0.0;
  double left = specfun::bessel_j_zero(nu, 1) / omega;
  {
    const auto head = integrate_finite(integrand, 0.0, left, panel);
    out.evaluations += head.evaluations;
    panel_error += head.error_estimate;
    partial.push_back(head.value);
  }

  auto extend = [&](int count) {
    for (int i = 0; i < count; ++i) {
      const int k = static_cast<int>(partial.size());  // next zero index is k + 1
      const double right = specfun::bessel_j_zero(nu, k + 1) / omega;
      const auto r = integrate_finite(integrand, left, right, panel);
      out.evaluations += r.evaluations;
      panel_error += r.error_estimate;
      partial.push_back(partial.back() + r.value);
      left = right;
    }
  };

  auto accelerated = [&](std::size_t end) {
    const std::size_t begin = end - (levels + 1);
    return detail::iterated_average({partial.begin() + begin, partial.begin() + end});
  };

  extend(first_batch);
  double previous_gap = INFINITY;
  int stalls = 0;
  while (true) {
    const double current = accelerated(partial.size());
    const double gap = std::abs(current - accelerated(partial.size() - 1));
    out.value = current;
    out.error_estimate = gap + panel_error;
    out.converged = out.error_estimate <= spec.tolerance_for(current);
    if (out.converged || gap <= 0.5 * spec.tolerance_for(current)) return out;
    stalls = gap < previous_gap ? 0 : stalls + 1;
    if (stalls >= 4)
      throw AccelerationError("averaged Bessel partial sums do not contract", out.error_estimate);
    if (static_cast<int>(partial.size()) >= max_panels) return out;
    previous_gap = std::min(previous_gap, gap);
    extend(batch);
  }
}

}  // namespace fjt::quad
