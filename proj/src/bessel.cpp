#include "qkr/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace qkr {

namespace {

constexpr double kUnderflowClamp = 1e-300;
constexpr double kRescaleLimit = 1e250;

// One backward-recurrence pass from seed order m_start down to 0.
// J_{m-1}(x) = (2m/x) J_m(x) - J_{m+1}(x), started with (0, tiny) and
// normalized afterwards with J_0 + 2 * sum_{k>=1} J_{2k} = 1.
Eigen::VectorXd miller_pass(double x, std::int64_t m_max, std::int64_t m_start) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m_max + 1);
  double upper = 0.0;          // f_{m+1}
  double current = 1e-30;      // f_m seed
  double even_sum = 0.0;       // running sum of f_{2k}, k >= 1
  if (m_start % 2 != 0) ++m_start;  // keep parity bookkeeping simple
  for (std::int64_t m = m_start; m >= 1; --m) {
    double lower = (2.0 * static_cast<double>(m) / x) * current - upper;
    upper = current;
    current = lower;
    const std::int64_t order = m - 1;  // value just produced is f_{m-1}
    if (order <= m_max) out(order) = current;
    if (order >= 2 && order % 2 == 0) even_sum += current;
    if (std::abs(current) > kRescaleLimit) {
      const double scale = 1.0 / kRescaleLimit;
      current *= scale;
      upper *= scale;
      even_sum *= scale;
      out *= scale;
    }
  }
  const double norm = current + 2.0 * even_sum;  // current == f_0
  out /= norm;
  for (Eigen::Index m = 0; m <= m_max; ++m) {
    if (std::abs(out(m)) < kUnderflowClamp) out(m) = 0.0;
  }
  return out;
}

std::int64_t start_order(double x, std::int64_t m_max) {
  // The seed must sit in the decaying regime above the turning point m ~ x,
  // regardless of how small m_max is.
  const auto base = std::max<std::int64_t>(m_max, static_cast<std::int64_t>(std::ceil(x)));
  const auto margin = std::max<std::int64_t>(20, static_cast<std::int64_t>(std::ceil(10.0 * std::cbrt(x))));
  return base + margin;
}

}  // namespace

BesselBand bessel_band(double x, std::int64_t m_max) {
  if (!(x >= 0.0)) throw domain_error("bessel_band requires x >= 0, got x=" + std::to_string(x));
  if (m_max < 0) throw domain_error("bessel_band requires m_max >= 0");

  BesselBand band;
  band.x = x;
  if (x == 0.0) {
    band.values = Eigen::VectorXd::Zero(m_max + 1);
    band.values(0) = 1.0;
    return band;
  }

  std::int64_t m_start = start_order(x, m_max);
  Eigen::VectorXd vals = miller_pass(x, m_max, m_start);
  // Self-check: double the start order until two passes agree to 1e-13.
  for (int attempt = 0; attempt < 6; ++attempt) {
    const Eigen::VectorXd check = miller_pass(x, m_max, 2 * m_start);
    double worst = 0.0;
    for (Eigen::Index m = 0; m <= m_max; ++m) {
      const double scale = std::max(std::abs(check(m)), 1e-280);
      worst = std::max(worst, std::abs(vals(m) - check(m)) / scale);
    }
    if (worst <= 1e-13) {
      vals = check;
      break;
    }
    m_start *= 2;
    vals = check;
  }
  band.values = std::move(vals);
  return band;
}

std::int64_t band_cutoff(double x, double tail_tol) {
  if (!(x >= 0.0)) throw domain_error("band_cutoff requires x >= 0");
  if (!(tail_tol > 0.0)) throw domain_error("band_cutoff requires tail_tol > 0");
  if (x == 0.0) return 0;

  // Generous upper bound on where the tail can still matter, then verify
  // against the computed band.
  const auto probe = static_cast<std::int64_t>(std::ceil(x) + std::ceil(10.0 * std::cbrt(x))) + 60;
  const BesselBand band = bessel_band(x, probe);

  double tail = 0.0;
  std::int64_t cutoff = probe;
  for (std::int64_t m = probe; m >= 1; --m) {
    tail += band.values(m) * band.values(m);
    if (tail >= tail_tol) {
      cutoff = m;  // smallest M with strict tail < tol is this m
      break;
    }
    cutoff = m - 1;
  }
  return cutoff;
}

}  // namespace qkr
