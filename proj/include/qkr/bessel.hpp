#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "qkr/errors.hpp"

namespace qkr {

// Cylindrical Bessel values J_0(x)..J_m_max(x) for one non-negative argument.
// Negative orders are the caller's business via J_{-m} = (-1)^m J_m.
struct BesselBand {
  double x = 0.0;
  Eigen::VectorXd values;  // values[m] = J_m(x)

  double at(std::int64_t m) const {
    const std::int64_t a = m < 0 ? -m : m;
    if (a >= values.size()) return 0.0;
    const double v = values(a);
    return (m < 0 && (a & 1)) ? -v : v;
  }
};

// Miller backward recurrence, normalized by J_0 + 2*sum J_{2k} = 1.
// Relative accuracy ~1e-14 for values above the 1e-300 underflow clamp.
BesselBand bessel_band(double x, std::int64_t m_max);

// Smallest M with sum_{m>M} J_m(x)^2 < tail_tol, verified on a computed band.
std::int64_t band_cutoff(double x, double tail_tol);

}  // namespace qkr
