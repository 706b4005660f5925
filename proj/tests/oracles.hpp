#pragma once

// Test-only reference implementations, kept independent of the library's
// evaluation paths.

#include <cstdint>

namespace qkr_test {

// Direct power series J_m(x) = sum_k (-1)^k (x/2)^(2k+m) / (k! (k+m)!),
// summed in quad precision so cancellation at x ~ 20 stays far below the
// 1e-12 comparison tolerance.
inline double bessel_series(double x, int m) {
  using F = __float128;
  const F h = static_cast<F>(x) / 2;
  F term = 1;
  for (int i = 1; i <= m; ++i) term *= h / i;
  F sum = term;
  const F h2 = h * h;
  for (int k = 1; k < 500; ++k) {
    term *= -h2 / (static_cast<F>(k) * static_cast<F>(k + m));
    sum += term;
    F mag = term < 0 ? -term : term;
    F ref = sum < 0 ? -sum : sum;
    if (static_cast<double>(mag) < 1e-45 * (static_cast<double>(ref) + 1e-300) &&
        2 * k > x) {
      break;
    }
  }
  return static_cast<double>(sum);
}

// First positive zero of J_0 located by bisection on the series oracle.
inline double bessel_j0_first_zero() {
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (bessel_series(lo, 0) * bessel_series(mid, 0) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qkr_test
