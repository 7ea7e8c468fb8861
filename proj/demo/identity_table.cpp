// Runs every identity over its default grid and prints one summary line each.
#include <algorithm>
#include <cstdio>

#include "fjt/verify.hpp"

int main() {
  using namespace fjt::verify;
  int failed_total = 0;
  for (auto id : all_identities) {
    const auto rows = run_default_grid(id);
    int failed = 0;
    double worst = 0.0;
    for (const auto& r : rows) {
      failed += !r.passed;
      worst = std::max(worst, r.residual);
    }
    failed_total += failed;
    std::printf("%-14s %4zu checks  %2d failed  worst residual %.2e\n", to_string(id), rows.size(), failed, worst);
  }
  std::printf("empirical sup sqrt(x)|J_0(x)| on (0, 100]: %.4f\n", measure_bessel_envelope(0.0));
  return failed_total == 0 ? 0 : 1;
}
