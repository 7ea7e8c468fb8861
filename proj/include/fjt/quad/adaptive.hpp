#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fjt/error.hpp"
#include "fjt/quad/rules.hpp"

namespace fjt::quad {

/// Truncate the semi-infinite range at a caller-chosen radius.
struct FixedRadius {
  double radius;
};

/// Truncate where the a-priori tail bound C R^(s+1) / |s+1| drops to the budget.
/// An empty budget means abs_tol / 10.
struct DecayBudget {
  std::optional<double> budget;
};

using TailCutoff = std::variant<DecayBudget, FixedRadius>;

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  int max_subdivisions = 2000;
  /// Known algebraic decay rate s of the integrand, |f(x)| <= C x^s for large x.
  std::optional<double> tail_exponent;
  /// Envelope constant C paired with tail_exponent.
  double tail_envelope = 1.0;
  /// The integrand decays at least exponentially; no algebraic tail exponent needed.
  bool exponential_decay = false;
  TailCutoff tail_cutoff = DecayBudget{};

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      throw DomainError("quadrature tolerances must be positive");
    if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
    if (!(tail_envelope >= 0.0)) throw DomainError("tail envelope must be non-negative");
  }

  double tolerance_for(double value) const {
    return std::max(abs_tol, rel_tol * std::abs(value));
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

/// Throws NonConvergenceError when r did not meet its tolerance.
inline const QuadratureResult& require_converged(const QuadratureResult& r,
                                                 const std::string& what) {
  if (!r.converged) throw NonConvergenceError(what + ": quadrature did not converge", r.error_estimate);
  return r;
}

namespace detail {

/// Compensated (Neumaier) summation in the given order.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Segment {
  double lo, hi, value, error;
  double magnitude = 0.0;  // estimate of the integral of |f|
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
double checked_eval(F& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) throw EvaluationError("non-finite integrand value", x);
  return v;
}

/// One Gauss-Kronrod 15 panel with the QUADPACK error heuristic.
template <class F>
Segment gk15(F& f, double lo, double hi) {
  using R = GaussKronrod15;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);

  std::array<double, 15> fv{};
  fv[7] = checked_eval(f, mid);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * R::nodes[j];
    fv[j] = checked_eval(f, mid - dx);
    fv[14 - j] = checked_eval(f, mid + dx);
  }

  double resk = R::kronrod_weights[7] * fv[7];
  double resg = R::gauss_weights[3] * fv[7];
  double resabs = std::abs(resk);
  for (int j = 0; j < 7; ++j) {
    const double pair = fv[j] + fv[14 - j];
    resk += R::kronrod_weights[j] * pair;
    resabs += R::kronrod_weights[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
    if (j % 2 == 1) resg += R::gauss_weights[j / 2] * pair;
  }
  const double mean = 0.5 * resk;
  double resasc = R::kronrod_weights[7] * std::abs(fv[7] - mean);
  for (int j = 0; j < 7; ++j)
    resasc += R::kronrod_weights[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));

  const double ah = std::abs(half);
  resabs *= ah;
  resasc *= ah;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {lo, hi, resk * half, err, resabs};
}

/// Global adaptive bisection starting from the partition given by `edges`.
template <class F>
QuadratureResult adaptive(F& f, std::span<const double> edges, const QuadratureSpec& spec) {
  std::priority_queue<Segment> active;
  std::vector<Segment> frozen;
  QuadratureResult out;

  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i] < edges[i + 1])) continue;
    active.push(gk15(f, edges[i], edges[i + 1]));
    out.evaluations += 15;
  }

  auto totals = [&]() {
    std::vector<Segment> all = frozen;
    auto copy = active;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(), [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
    CompensatedSum value, error;
    for (const auto& s : all) {
      value.add(s.value);
      error.add(s.error);
    }
    return std::pair{value.value(), error.value()};
  };

  // running sums drive the loop; the final answer is re-summed in a fixed order
  double value = 0.0, error = 0.0;
  {
    auto [v, e] = totals();
    value = v;
    error = e;
  }
  while (!active.empty()) {
    if (error <= spec.tolerance_for(value)) break;
    const int count = static_cast<int>(active.size() + frozen.size());
    if (count >= spec.max_subdivisions) break;

    Segment worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi) ||
        (worst.hi - worst.lo) <= 64.0 * std::numeric_limits<double>::epsilon() *
                                     std::max(std::abs(worst.lo), std::abs(worst.hi))) {
      frozen.push_back(worst);
      continue;
    }
    const Segment left = gk15(f, worst.lo, mid);
    const Segment right = gk15(f, mid, worst.hi);
    out.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
  }

  auto [v, e] = totals();
  out.value = v;
  out.error_estimate = e;
  out.converged = e <= spec.tolerance_for(v);
  return out;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod 15 quadrature of f over [lo, hi], bisecting the
/// panel with the largest error. Extra breakpoints (kinks, known features)
/// seed the initial partition. Endpoints are never evaluated.
template <class F>
QuadratureResult integrate_finite(F&& f, double lo, double hi, const QuadratureSpec& spec,
                                  std::span<const double> breakpoints = {}) {
  spec.validate();
  if (!(lo < hi)) throw DomainError("integrate_finite requires lo < hi");
  std::vector<double> edges{lo};
  for (double b : breakpoints)
    if (b > lo && b < hi) edges.push_back(b);
  edges.push_back(hi);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return detail::adaptive(f, edges, spec);
}

/// Truncation radius and a-priori tail bound for an algebraically decaying integrand.
struct TailPlan {
  double radius;
  double tail_bound;
};

inline constexpr double max_tail_radius = 1e100;

/// Applies the tail cutoff policy for |f| <= envelope * x^exponent, exponent < -1.
inline TailPlan plan_algebraic_tail(double exponent, double envelope, const QuadratureSpec& spec) {
  if (!(exponent < -1.0))
    throw DivergenceError("tail exponent " + error_detail::short_number(exponent) +
                          " >= -1: integral over (0, inf) does not converge absolutely");
  const double p = exponent + 1.0;  // negative
  auto bound_at = [&](double r) { return envelope * std::pow(r, p) / std::abs(p); };
  if (const auto* fixed = std::get_if<FixedRadius>(&spec.tail_cutoff)) {
    if (!(fixed->radius > 0.0)) throw DomainError("fixed tail radius must be positive");
    return {fixed->radius, bound_at(fixed->radius)};
  }
  const auto& policy = std::get<DecayBudget>(spec.tail_cutoff);
  const double budget = policy.budget.value_or(spec.abs_tol / 10.0);
  if (!(budget > 0.0)) throw DomainError("tail budget must be positive");
  if (envelope == 0.0) return {1.0, 0.0};
  const double radius = std::max(1.0, std::pow(budget * std::abs(p) / envelope, 1.0 / p));
  if (!(radius <= max_tail_radius))
    throw NonConvergenceError("tail budget needs truncation radius beyond 1e100", bound_at(max_tail_radius));
  return {radius, bound_at(radius)};
}

namespace detail {

inline std::vector<double> geometric_edges(double radius) {
  std::vector<double> edges{0.0};
  if (radius <= 1.0) {
    edges.push_back(radius);
    return edges;
  }
  for (double e = 1.0; e < radius; e *= 2.0) edges.push_back(e);
  edges.push_back(radius);
  return edges;
}

/// Doubles R from 16 until the panel [R, 2R] carries less than abs_tol / 10.
template <class F>
double doubling_radius(F& f, const QuadratureSpec& spec, long& evaluations) {
  double r = 16.0;
  for (int k = 0; k < 60; ++k) {
    const Segment s = gk15(f, r, 2.0 * r);
    evaluations += 15;
    const double mass = std::max(std::abs(s.value), s.error);
    r *= 2.0;
    if (mass < spec.abs_tol / 10.0) return r;
  }
  return r;
}

}  // namespace detail

/// Integral of f over (0, inf): adaptive quadrature on (0, R] seeded with
/// dyadic panels, plus the tail policy for [R, inf). The a-priori tail bound
/// is folded into error_estimate.
template <class F>
QuadratureResult integrate_semi_infinite(F&& f, const QuadratureSpec& spec) {
  spec.validate();
  long probe_evals = 0;
  double radius = 0.0;
  double tail = 0.0;
  bool radius_known = false;

  if (spec.tail_exponent && !(spec.exponential_decay && *spec.tail_exponent >= -1.0)) {
    const TailPlan plan = plan_algebraic_tail(*spec.tail_exponent, spec.tail_envelope, spec);
    radius = plan.radius;
    tail = plan.tail_bound;
    radius_known = true;
  } else if (const auto* fixed = std::get_if<FixedRadius>(&spec.tail_cutoff)) {
    radius = fixed->radius;
    radius_known = true;
  }
  if (!radius_known) radius = detail::doubling_radius(f, spec, probe_evals);

  QuadratureSpec inner = spec;
  inner.abs_tol = tail < spec.abs_tol * 0.9 ? spec.abs_tol - tail : spec.abs_tol / 10.0;
  if (tail > 0.0) inner.rel_tol = spec.rel_tol / 2.0;
  const auto edges = detail::geometric_edges(radius);
  inner.max_subdivisions = std::max<int>(spec.max_subdivisions, static_cast<int>(edges.size()) + 1);
  QuadratureResult r = detail::adaptive(f, edges, inner);
  r.evaluations += probe_evals;
  r.error_estimate += tail;
  r.converged = r.error_estimate <= spec.tolerance_for(r.value);
  return r;
}

}  // namespace fjt::quad
