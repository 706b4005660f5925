#include "qkr/validate.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "qkr/bessel.hpp"
#include "qkr/propagator.hpp"

namespace qkr {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

double max_amp_diff(const WaveState& a, const WaveState& b) {
  const std::int64_t lo = std::min(a.l_min, b.l_min);
  const std::int64_t hi = std::max(a.l_max(), b.l_max());
  double worst = 0.0;
  for (std::int64_t l = lo; l <= hi; ++l) {
    worst = std::max(worst, std::abs(a.at(l) - b.at(l)));
  }
  return worst;
}

}  // namespace

std::vector<CheckResult> run_validation_suite(bool inject_phase_fault) {
  std::vector<CheckResult> results;
  const auto push = [&results](const std::string& name, bool pass, const std::string& detail) {
    results.push_back({name, pass, detail});
  };

  // Bessel normalization J_0^2 + 2 sum J_m^2 = 1.
  {
    double worst = 0.0;
    for (const double x : {0.5, 1.0, 5.0, 20.0, 100.0, 1000.0}) {
      const auto band = bessel_band(x, band_cutoff(x, 1e-16));
      double s = band.values(0) * band.values(0);
      for (Eigen::Index m = 1; m < band.values.size(); ++m) {
        s += 2.0 * band.values(m) * band.values(m);
      }
      worst = std::max(worst, std::abs(s - 1.0));
    }
    push("bessel normalization", worst <= 1e-10, "max |sum-1| = " + fmt(worst));
  }

  // Bessel three-term recurrence residual.
  {
    const double x = 7.3;
    const auto band = bessel_band(x, 40);
    double worst = 0.0;
    for (Eigen::Index m = 1; m + 1 < band.values.size(); ++m) {
      const double lhs = band.values(m - 1) + band.values(m + 1);
      const double rhs = 2.0 * static_cast<double>(m) / x * band.values(m);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    push("bessel recurrence", worst <= 1e-10, "max residual = " + fmt(worst));
  }

  // Exact phase periodicity in j -> j + q.
  {
    const auto table = make_phase_table(make_resonance(2, 5));
    bool ok = true;
    for (std::int64_t j = -13; j <= 13; ++j) {
      if (free_phase(j, table) != free_phase(j + 5, table)) ok = false;
    }
    push("phase periodicity", ok, ok ? "exact over j in [-13, 13]" : "mismatch found");
  }

  // Unitarity over 30 banded steps at p/q = 2/5 (fault injection hooks in
  // here: one corrupted table entry must trip this check).
  {
    auto table = make_phase_table(make_resonance(2, 5));
    if (inject_phase_fault) table.phases(1) *= 1.0002;
    WaveState st = initial_state(DeltaInitial{0}, 1);
    TruncationPolicy policy;
    double worst = 0.0;
    for (int n = 1; n <= 30; ++n) {
      st = step_banded(st, table, 1.0, policy, 1e-28);
      worst = std::max(worst, std::abs(st.norm_sq() + st.leaked_norm - 1.0));
    }
    push("unitarity (banded, 2/5)", worst <= 1e-10, "max |norm-1| = " + fmt(worst));
  }

  // Banded and spectral realize the same operator.
  {
    const auto table = make_phase_table(make_resonance(2, 5));
    TruncationPolicy policy;
    WaveState a = initial_state(DeltaInitial{0}, 1);
    WaveState b = a;
    double worst = 0.0;
    for (int n = 1; n <= 20; ++n) {
      const double kappa = std::pow(static_cast<double>(n), -0.1);
      a = step_banded(a, table, kappa, policy, 1e-28);
      b = step_spectral(b, table, kappa, policy, 0, 1e-28);
      worst = std::max(worst, max_amp_diff(a, b));
    }
    push("banded vs spectral", worst <= 1e-10, "max amplitude diff = " + fmt(worst));
  }

  // Numeric steps reproduce the closed form at a primary resonance.
  {
    const auto table = make_phase_table(make_resonance(1, 1));
    TruncationPolicy policy;
    WaveState st = initial_state(DeltaInitial{0}, 1);
    double n_star = 0.0;
    for (int n = 1; n <= 30; ++n) {
      const double kappa = std::pow(static_cast<double>(n), -0.2);
      n_star += kappa;
      st = step_banded(st, table, kappa, policy, 1e-28);
    }
    const WaveState exact =
        analytic_amplitudes(DeltaInitial{0}, n_star, analytic_halfwidth(DeltaInitial{0}, n_star));
    const double worst = max_amp_diff(st, exact);
    push("analytic consistency (q=1)", worst <= 1e-8, "max amplitude diff = " + fmt(worst));
  }

  // Moment formulas against brute-force sums over the analytic state.
  {
    VectorXcd two(2);
    two << Complex{1.0 / std::sqrt(2.0), 0.0}, Complex{0.0, 1.0 / std::sqrt(2.0)};
    const InitialCondition ics[] = {DeltaInitial{0}, DeltaInitial{3}, CustomInitial{two, 0}};
    double worst = 0.0;
    for (const auto& ic : ics) {
      const double x = 7.5;
      const AnalyticMoments am = analytic_moments(ic, x);
      const WaveState st = analytic_amplitudes(ic, x, analytic_halfwidth(ic, x) + 4);
      const auto [m1, m2] = moments(st);
      worst = std::max(worst, std::abs(am.m1 - m1) / std::max(1.0, std::abs(m1)));
      worst = std::max(worst, std::abs(am.m2 - m2) / std::max(1.0, std::abs(m2)));
    }
    push("moment formulas", worst <= 1e-8, "max rel diff = " + fmt(worst));
  }

  // Reflection symmetry of delta-at-0 runs.
  {
    const auto table = make_phase_table(make_resonance(2, 5));
    TruncationPolicy policy;
    WaveState st = initial_state(DeltaInitial{0}, 1);
    double worst = 0.0;
    for (int n = 1; n <= 40; ++n) {
      st = step_banded(st, table, 1.0, policy, 1e-28);
      for (std::int64_t l = 1; l <= st.l_max(); ++l) {
        worst = std::max(worst, std::abs(st.prob(l) - st.prob(-l)));
      }
    }
    push("reflection symmetry", worst <= 1e-12, "max |P_l - P_-l| = " + fmt(worst));
  }

  return results;
}

}  // namespace qkr
