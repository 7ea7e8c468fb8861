// Synthesize f from a_n = e^(-2n)|Gamma(a+in/2)|^2, then recover the a_n by inversion.
#include <cstdio>

#include "fjt/transforms.hpp"

int main() {
  using namespace fjt;
  const JacobiParams p(0.75, 1.2);
  const auto seq = transforms::reference_sequence(p, 8);
  const auto f = transforms::synthesized_function(seq);

  std::printf("%6s %14s %14s\n", "x", "f(x)", "tail bound");
  for (double x : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const auto s = transforms::synthesize(seq, x);
    std::printf("%6.2f %14.8f %14.2e\n", x, s.value, s.tail_bound);
  }

  std::printf("\n%3s %14s %14s %10s\n", "n", "a_n", "recovered", "error");
  for (int n = 1; n <= seq.size(); ++n) {
    const auto r = transforms::invert_coefficients(f, p, n);
    std::printf("%3d %14.6e %14.6e %10.2e\n", n, seq.values[n - 1], r.value, std::abs(r.value - seq.values[n - 1]));
  }
}
