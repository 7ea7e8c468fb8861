// Acceptance run: one PASS/FAIL line per criterion, tolerances and time budgets pinned below.
// Usage: acceptance [path-to-fjt]   (the CLI path enables the process-level rerun check)

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fjt/cli.hpp"
#include "fjt/kernels.hpp"
#include "fjt/transforms.hpp"
#include "fjt/verify.hpp"

using namespace fjt;
using std::numbers::pi;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
  std::vector<std::string> notes;  // sub-checks, printed indented
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void note(Outcome& o, bool ok, const std::string& text) {
  o.passed = o.passed && ok;
  o.notes.push_back(std::string(ok ? "ok   " : "FAIL ") + text);
}

int failures = 0;

void criterion(int id, const char* title, double budget_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.passed = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs <= budget_seconds;
  const bool ok = o.passed && in_time;
  if (!ok) ++failures;
  std::printf("%s  criterion %2d  %s: %s [%.2f s of %.0f s]\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(),
              secs, budget_seconds);
  for (const auto& n : o.notes) std::printf("        %s\n", n.c_str());
  std::fflush(stdout);
}

Outcome grid_outcome(const std::vector<verify::IdentityReport>& rows) {
  Outcome o;
  int failed = 0;
  double worst_rel = 0.0, worst_abs = 0.0;
  for (const auto& r : rows) {
    if (!r.passed) ++failed;
    if (r.metric == verify::Metric::absolute)
      worst_abs = std::max(worst_abs, r.residual);
    else
      worst_rel = std::max(worst_rel, r.residual);
  }
  o.passed = failed == 0;
  o.detail = std::to_string(rows.size()) + " checks, " + std::to_string(failed) + " failed, worst residual " +
             num(worst_rel) + (worst_abs > 0.0 ? ", worst absolute " + num(worst_abs) : "");
  return o;
}

std::string capture(const std::string& command) {
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"), pclose);
  if (!pipe) return "<popen failed>";
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe.get())) out.append(buf.data(), n);
  return out;
}

std::string cli_output(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  cli::run_cli(args, out, err);
  return out.str() + err.str();
}

const JacobiParams kP(0.75, 1.2);

}  // namespace

int main(int argc, char** argv) {
  const std::string fjt_path = argc > 1 ? argv[1] : "";

  criterion(1, "closed-form kernel integral", 60, [] {
    auto o = grid_outcome(verify::run_default_grid(verify::IdentityId::lemma1));
    o.detail += " (tolerance relative 1e-6, absolute 1e-9 where sin(nu) = 0)";
    return o;
  });

  criterion(2, "Laplace transform of K_in", 10, [] {
    auto o = grid_outcome(verify::run_default_grid(verify::IdentityId::laplace_k));
    o.detail += " (tolerance relative 1e-6)";
    return o;
  });

  criterion(3, "kernel Bessel-product representation", 30, [] {
    auto o = grid_outcome(verify::run_default_grid(verify::IdentityId::bessel_repr));
    o.detail += " (tolerance relative 1e-6)";
    return o;
  });

  criterion(4, "Hankel closed form", 60, [] {
    auto o = grid_outcome(verify::run_default_grid(verify::IdentityId::hankel_closed));
    o.detail += " (tolerance relative 1e-4)";
    return o;
  });

  criterion(5, "series round trip, reference sequence N=8", 120, [] {
    constexpr double tol = 1e-4;
    const auto seq = transforms::reference_sequence(kP, 8);
    const auto f = transforms::synthesized_function(seq);
    double worst = 0.0;
    for (int n = 1; n <= 8; ++n)
      worst = std::max(worst, std::abs(transforms::invert_coefficients(f, kP, n).value - seq.values[n - 1]));
    return Outcome{worst <= tol, "max abs coefficient error " + num(worst) + " (tolerance 1e-4)", {}};
  });

  criterion(6, "profile round trip, exact cases", 120, [] {
    Outcome o;
    const double xs[] = {0.5, 1.0, 2.0};
    {
      const auto psi = transforms::profile("sin");
      const auto f = transforms::build_profile_function(psi, kP);
      double off = 0.0;
      for (int n = 2; n <= 5; ++n) {
        off = std::max(off, std::abs(transforms::analyze(f, kP, n).value));
        off = std::max(off, std::abs(transforms::closed_form_coefficients(psi, kP, n).value));
      }
      note(o, off <= 1e-9, "sin: off-diagonal |a_n|, n = 2..5, both paths: " + num(off) + " (tolerance 1e-9)");
      transforms::CoefficientSequence a{{transforms::analyze(f, kP, 1).value}, kP, 0.0};
      double err = 0.0;
      for (double x : xs) err = std::max(err, std::abs(transforms::reconstruct(a, kP, x, 1).value - f(x)));
      note(o, err <= 1e-5, "sin: N=1 reconstruction error at x = 0.5, 1, 2: " + num(err) + " (tolerance 1e-5)");
    }
    {
      const auto psi = transforms::profile("sin+0.3sin3");
      const auto f = transforms::build_profile_function(psi, kP);
      transforms::CoefficientSequence a{{}, kP, 0.0};
      for (int n = 1; n <= 3; ++n) a.values.push_back(transforms::analyze(f, kP, n).value);
      double err = 0.0;
      for (double x : xs) err = std::max(err, std::abs(transforms::reconstruct(a, kP, x, 3).value - f(x)));
      note(o, err <= 1e-4, "sin+0.3sin3: N=3 reconstruction error: " + num(err) + " (tolerance 1e-4)");
    }
    o.detail = o.passed ? "all sub-checks pass" : "sub-check failed";
    return o;
  });

  criterion(7, "coefficient paths agree, ramp profile", 60, [] {
    Outcome o;
    const auto psi = transforms::profile("ramp");
    const auto f = transforms::build_profile_function(psi, kP);
    for (int n = 1; n <= 3; ++n) {
      const double q = transforms::analyze(f, kP, n).value;
      const double c = transforms::closed_form_coefficients(psi, kP, n).value;
      const bool zero = std::abs(c) <= 1e-9;
      const double r = zero ? std::abs(q - c) : std::abs(q - c) / std::abs(c);
      note(o, r <= (zero ? 1e-9 : 1e-6),
           "n=" + std::to_string(n) + ": quadrature " + num(q) + ", closed form " + num(c) + ", " +
               (zero ? "absolute " : "relative ") + "difference " + num(r));
    }
    o.detail = "relative 1e-6, absolute 1e-9 at zeros";
    return o;
  });

  criterion(8, "discrete orthogonality", 60, [] {
    double worst = 0.0;
    for (int m = 1; m <= 3; ++m) {
      transforms::CoefficientSequence e = transforms::zero_sequence(kP, m);
      e.values.back() = 1.0;
      const auto f = transforms::synthesized_function(e);
      for (int n = 1; n <= 3; ++n)
        worst = std::max(worst, std::abs(transforms::invert_coefficients(f, kP, n).value - (n == m ? 1.0 : 0.0)));
    }
    return Outcome{worst <= 1e-4,
                   "max |C_n int x^(2c-1) Phi_n F_m dx - delta_nm| = " + num(worst) + " (tolerance 1e-4)", {}};
  });

  criterion(9, "bound suite", 10, [] {
    Outcome o;
    const auto k = grid_outcome(verify::run_default_grid(verify::IdentityId::k_inequality));
    note(o, k.passed, "K_in inequality: " + k.detail);
    const auto b = grid_outcome(verify::run_default_grid(verify::IdentityId::kernel_bound));
    note(o, b.passed, "kernel envelope and no growth in n: " + b.detail);
    o.detail = o.passed ? "all bounds hold" : "bound violated";
    return o;
  });

  criterion(10, "property suite", 60, [&fjt_path] {
    Outcome o;
    const auto params = verify::default_params();
    {
      bool unit = true;
      for (const auto& p : params)
        for (int n : {1, 2, 3}) unit = unit && kernels::forward_kernel(p, n, 0.0) == 1.0;
      note(o, unit, "F_n(0) = 1 for all parameter pairs and n = 1..3");
    }
    {
      double worst = 0.0;
      for (const auto& p : params)
        for (int n : {1, 2, 3}) {
          const double e = kernels::forward_decay_exponent(p, n, 10.0), want = -2.0 * p.a();
          worst = std::max(worst, std::abs(e - want) / std::abs(want));
        }
      note(o, worst <= 0.3, "forward decay exponent, phase-matched doubling at x=10: worst deviation " + num(worst) +
                                " of -2a (tolerance 30%)");
    }
    {
      double worst_phi = 0.0, worst_g = 0.0;
      for (const auto& p : params) {
        const double want = kernel_decay(p).exponent_inverse;
        for (int n : {1, 2, 3})
          worst_phi = std::max(worst_phi, std::abs(kernels::phi_doubling_exponent(p, n, 20.0) - want) / std::abs(want));
        const double g = std::log2(kernels::inverse_kernel(p, 40.0, 0.0) / kernels::inverse_kernel(p, 20.0, 0.0));
        worst_g = std::max(worst_g, std::abs(g - want) / std::abs(want));
      }
      note(o, worst_phi <= 0.3 && worst_g <= 0.3,
           "inverse envelope doubling 20 -> 40: Phi_n worst deviation " + num(worst_phi) + ", G(x,0) worst deviation " +
               num(worst_g) + " of 2a-2c-1 (tolerance 30%)");
    }
    {
      double worst = 0.0, product = 0.0;
      for (const auto& p : params)
        for (int n = 1; n <= 20; ++n) {
          const auto k = kernels::normalization(p, n);
          product = k.theorem1_prefactor * k.closed_coeff_prefactor;
          worst = std::max(worst, std::abs(product - 2.0 / pi));
        }
      note(o, worst <= 1e-12, "prefactor product = 2/pi: measured " + num(product) + ", max |product - 2/pi| " +
                                  num(worst) + " (tolerance 1e-12)");
      double worst_inv = 0.0;
      for (const auto& p : params)
        for (int n = 1; n <= 20; ++n) {
          const auto k = kernels::normalization(p, n);
          worst_inv = std::max(worst_inv, std::abs(k.theorem1_prefactor * k.closed_coeff_prefactor - 1.0 / pi));
        }
      o.notes.push_back("info prefactor product = 1/pi, n = 1..20: max deviation " + num(worst_inv));
    }
    {
      const std::vector<std::vector<std::string>> runs = {
          {"kernel", "--grid", "0,0.5,1,2,10", "--n", "2"},
          {"synth", "--grid", "0.5,1,2", "--format", "json"},
          {"analyze", "--profile", "ramp", "--N", "3"},
          {"verify", "--identity", "hankel_closed"},
      };
      bool same = true;
      for (const auto& r : runs) same = same && cli_output(r) == cli_output(r);
      note(o, same, "in-process CLI reruns byte-identical (4 commands)");
      if (!fjt_path.empty()) {
        bool proc = true;
        for (const auto& r : runs) {
          std::string cmd = "'" + fjt_path + "'";
          for (const auto& a : r) cmd += " '" + a + "'";
          const auto first = capture(cmd), second = capture(cmd);
          proc = proc && !first.empty() && first == second;
        }
        note(o, proc, "separate-process CLI reruns byte-identical (4 commands)");
      }
    }
    o.detail = o.passed ? "all properties hold" : "a property check failed";
    return o;
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
