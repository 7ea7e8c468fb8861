// Coefficients of the ramp profile function, and how the partial sums approach f as N grows.
#include <cstdio>

#include "fjt/transforms.hpp"

int main() {
  using namespace fjt;
  const JacobiParams p(0.75, 1.2);
  const auto psi = transforms::profile("ramp");
  const auto f = transforms::build_profile_function(psi, p);

  constexpr int N = 15;
  transforms::CoefficientSequence a{{}, p, 0.0};
  std::printf("%3s %16s %16s\n", "n", "quadrature", "closed form");
  for (int n = 1; n <= N; ++n) {
    const double q = transforms::analyze(f, p, n).value;
    const double c = transforms::closed_form_coefficients(psi, p, n).value;
    a.values.push_back(c);
    std::printf("%3d %16.8e %16.8e\n", n, q, c);
  }

  const double x = 1.0;
  std::printf("\nf(%g) = %.10f\n%3s %16s %12s\n", x, f(x), "N", "partial sum", "error");
  for (int n : {1, 3, 5, 9, 15}) {
    const auto r = transforms::reconstruct(a, p, x, n);
    std::printf("%3d %16.10f %12.3e%s\n", n, r.value, std::abs(r.value - f(x)), r.warning ? "  (last term large)" : "");
  }
}
