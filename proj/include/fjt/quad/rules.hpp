#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace fjt::quad {

/// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
/// Nodes are listed for the non-negative half; index 7 is the centre.
/// Odd indices 1, 3, 5, 7 are the Gauss nodes.
struct GaussKronrod15 {
  static constexpr std::array<double, 8> nodes = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

  static constexpr std::array<double, 8> kronrod_weights = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

  // weights of the embedded Gauss rule at nodes[1], nodes[3], nodes[5], nodes[7]
  static constexpr std::array<double, 4> gauss_weights = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

/// N-point Gauss-Legendre rule on [-1, 1], computed once by Newton iteration
/// on P_N. Instances are immutable after construction.
template <int N>
struct GaussLegendreRule {
  static_assert(N >= 1);
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendreRule() {
    for (int i = 0; i < (N + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= N; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
        }
        dp = N * (x * p0 - p1) / (x * x - 1.0);
        const double dx = p0 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = -x;
      nodes[N - 1 - i] = x;
      weights[i] = weights[N - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

template <int N>
const GaussLegendreRule<N>& gauss_legendre() {
  static const GaussLegendreRule<N> rule;
  return rule;
}

/// Fixed-order Gauss-Legendre sum of f over [lo, hi].
template <int N, class F>
double gauss_legendre_panel(F&& f, double lo, double hi) {
  const auto& rule = gauss_legendre<N>();
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (int i = 0; i < N; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

}  // namespace fjt::quad
