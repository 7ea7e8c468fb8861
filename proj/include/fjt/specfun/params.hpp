#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "fjt/error.hpp"

namespace fjt {

/// Whether the closed boundary c = 1/2 (only for 0 < a < 1/2) counts as
/// admissible for the inversion theorems. Treated as experimental.
enum class Boundary { exclude, include };

/// The kernel parameter pair (a, c), both strictly positive.
class JacobiParams {
 public:
  JacobiParams(double a, double c) : a_(a), c_(c) {
    if (!(a > 0.0) || !(c > 0.0) || !std::isfinite(a) || !std::isfinite(c)) {
      std::ostringstream os;
      os << "parameters must satisfy a > 0 and c > 0 (got a=" << a << ", c=" << c << ")";
      throw DomainError(os.str());
    }
  }

  double a() const noexcept { return a_; }
  double c() const noexcept { return c_; }

  /// c > max(0, a - 1/2): the closed-form kernel integral holds.
  bool regime_lemma1() const noexcept { return c_ > std::max(0.0, a_ - 0.5); }

  /// max(1/2, 2a - 1/2) < c < 2a + 1/2, optionally admitting c = 1/2 when 0 < a < 1/2.
  bool regime_theorems(Boundary boundary = Boundary::exclude) const noexcept {
    if (c_ > std::max(0.5, 2.0 * a_ - 0.5) && c_ < 2.0 * a_ + 0.5) return true;
    return boundary == Boundary::include && c_ == 0.5 && a_ < 0.5;
  }

  void require_lemma1() const {
    if (!regime_lemma1()) fail("c > max(0, a - 1/2)");
  }

  void require_theorems(Boundary boundary = Boundary::exclude) const {
    if (!regime_theorems(boundary)) fail("max(1/2, 2a-1/2) < c < 2a+1/2");
  }

  friend bool operator==(const JacobiParams&, const JacobiParams&) = default;

 private:
  [[noreturn]] void fail(const std::string& inequality) const {
    std::ostringstream os;
    os << "parameter regime violated: requires " << inequality << " (got a=" << a_ << ", c=" << c_ << ")";
    throw DomainError(os.str());
  }

  double a_;
  double c_;
};

/// Large-argument algebraic decay exponents of the two kernels in x
/// (argument -x^2): forward ~ x^(-2a), inverse ~ x^(2a-2c-1).
struct KernelDecay {
  double exponent_forward;
  double exponent_inverse;
};

inline KernelDecay kernel_decay(const JacobiParams& p) {
  return {-2.0 * p.a(), 2.0 * (p.a() - p.c()) - 1.0};
}

}  // namespace fjt
