#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "qkr/bessel.hpp"

using namespace qkr;

namespace {

const double kOracleGrid[] = {0.5, 1.0, 2.0, 3.7, 5.0, 7.3, 9.6, 12.1, 14.8, 17.2, 20.0};

double normalization_sum(const BesselBand& band) {
  double s = band.values(0) * band.values(0);
  for (Eigen::Index m = 1; m < band.values.size(); ++m) {
    s += 2.0 * band.values(m) * band.values(m);
  }
  return s;
}

}  // namespace

TEST_CASE("J_m(0) is the Kronecker delta") {
  const BesselBand band = bessel_band(0.0, 3);
  CHECK(band.values(0) == 1.0);
  CHECK(band.values(1) == 0.0);
  CHECK(band.values(2) == 0.0);
  CHECK(band.values(3) == 0.0);
}

TEST_CASE("J_0(1) against the power-series value") {
  // Frozen from the series oracle, summed to convergence.
  const double frozen = 0.7651976865579666;
  CHECK(std::abs(qkr_test::bessel_series(1.0, 0) - frozen) < 1e-15);
  const BesselBand band = bessel_band(1.0, 0);
  CHECK(band.values(0) == doctest::Approx(frozen).epsilon(1e-14));
}

TEST_CASE("first zero of J_0") {
  const double zero = qkr_test::bessel_j0_first_zero();
  CHECK(std::abs(zero - 2.404825557695773) < 1e-12);
  const BesselBand band = bessel_band(zero, 0);
  CHECK(std::abs(band.values(0)) < 1e-10);
}

TEST_CASE("normalization identity J_0^2 + 2 sum J_m^2 = 1") {
  for (const double x : {0.5, 1.0, 5.0, 20.0, 100.0, 1000.0}) {
    const BesselBand band = bessel_band(x, band_cutoff(x, 1e-16));
    CHECK(std::abs(normalization_sum(band) - 1.0) < 1e-10);
  }
}

TEST_CASE("series oracle agreement for x <= 20, m <= 30") {
  for (const double x : kOracleGrid) {
    const BesselBand band = bessel_band(x, 30);
    for (int m = 0; m <= 30; ++m) {
      const double ref = qkr_test::bessel_series(x, m);
      if (std::abs(ref) > 1e-280) {
        CHECK(std::abs(band.values(m) - ref) <= 1e-12 * std::abs(ref));
      } else {
        CHECK(std::abs(band.values(m)) <= 1e-280);
      }
    }
  }
}

TEST_CASE("three-term recurrence residual") {
  for (const double x : kOracleGrid) {
    const BesselBand band = bessel_band(x, band_cutoff(x, 1e-16) + 2);
    for (Eigen::Index m = 1; m + 1 < band.values.size(); ++m) {
      const double residual = band.values(m - 1) + band.values(m + 1) -
                              2.0 * static_cast<double>(m) / x * band.values(m);
      CHECK(std::abs(residual) <= 1e-10 * std::max(1.0, std::abs(band.values(m))));
    }
  }
}

TEST_CASE("derivative identity J_0' = -J_1 by central difference") {
  const double x = 3.7, h = 1e-6;
  const double plus = bessel_band(x + h, 0).values(0);
  const double minus = bessel_band(x - h, 0).values(0);
  const double j1 = bessel_band(x, 1).values(1);
  CHECK(std::abs((plus - minus) / (2.0 * h) + j1) < 1e-8);
}

TEST_CASE("values are bounded by 1 and clamp to zero below 1e-300") {
  const BesselBand band = bessel_band(12.1, 260);
  for (Eigen::Index m = 0; m < band.values.size(); ++m) {
    CHECK(std::abs(band.values(m)) <= 1.0);
    if (band.values(m) != 0.0) CHECK(std::abs(band.values(m)) >= 1e-300);
  }
  CHECK(band.values(240) == 0.0);  // far past the turning point
}

TEST_CASE("band_cutoff tail bound is verified against the band") {
  CHECK(band_cutoff(0.0, 1e-14) == 0);
  for (const double x : {1.0, 10.0, 100.0}) {
    for (const double tol : {1e-10, 1e-14, 1e-20}) {
      const std::int64_t cut = band_cutoff(x, tol);
      const BesselBand band = bessel_band(x, 2 * cut + 60);
      double tail = 0.0;
      for (Eigen::Index m = cut + 1; m < band.values.size(); ++m) {
        tail += band.values(m) * band.values(m);
      }
      CHECK(tail < tol);
      if (cut > 0) {
        // one order lower must violate the bound, otherwise cut is not minimal
        tail += band.values(cut) * band.values(cut);
        CHECK(tail >= tol);
      }
    }
  }
}

TEST_CASE("band_cutoff is monotone in x") {
  const double xs[] = {0.0, 0.3, 0.5, 1.0, 2.0, 3.7, 5.0, 9.6, 17.2, 40.0, 100.0, 400.0};
  std::int64_t prev = -1;
  for (const double x : xs) {
    const std::int64_t cut = band_cutoff(x, 1e-14);
    CHECK(cut >= prev);
    prev = cut;
  }
}

TEST_CASE("negative argument is rejected") {
  CHECK_THROWS_AS(bessel_band(-1.0, 3), domain_error);
  CHECK_THROWS_AS(band_cutoff(-1.0, 1e-14), domain_error);
  CHECK_THROWS_AS(band_cutoff(1.0, 0.0), domain_error);
}

TEST_CASE("signed-order access uses the reflection rule") {
  const BesselBand band = bessel_band(2.0, 5);
  CHECK(band.at(-1) == -band.at(1));
  CHECK(band.at(-2) == band.at(2));
  CHECK(band.at(-7) == 0.0);  // past the stored band
}
