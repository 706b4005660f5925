#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qkr/core.hpp"

namespace qkr {

// --------------------------------------------------------------------------
// Per-step record of the evolution.
struct MomentRecord {
  std::int64_t n = 0;
  double n_star = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double sigma = 0.0;
  double norm_error = 0.0;
};

struct TimeSeries {
  std::vector<MomentRecord> records;
};

// First and second moments of the momentum distribution.
std::pair<double, double> moments(const WaveState& state);

// E = epsilon * M2 with epsilon = hbar^2 / 2I in the caller's units.
double energy(const WaveState& state, double epsilon);

inline double sigma_from_moments(double m1, double m2) {
  const double var = m2 - m1 * m1;
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

// --------------------------------------------------------------------------
// Closed-form primary-resonance moments as functions of n*.
struct AnalyticMoments {
  double m1 = 0.0;
  double m2 = 0.0;
  double sigma = 0.0;
};

AnalyticMoments analytic_moments(const InitialCondition& ic, double n_star);

// --------------------------------------------------------------------------
// Power-law exponent fit over a trailing window of the series.
enum class FitModel { PowerLaw, Logarithmic };

struct GammaFit {
  double gamma = 0.0;          // power-law slope on (ln n, ln sigma)
  double log_amplitude = 0.0;  // power-law intercept (ln A)
  std::int64_t n_lo = 0;
  std::int64_t n_hi = 0;
  double rms_residual = 0.0;   // of the selected model, sigma-space, normalized
  FitModel model = FitModel::PowerLaw;

  // Both candidate fits, kept for diagnostics and model comparison.
  double power_rms = 0.0;
  double log_rms = 0.0;
  double log_slope = 0.0;      // a in sigma = a*ln n + b
  double log_intercept = 0.0;  // b
};

struct FitOptions {
  std::int64_t window_len = 100;
  std::int64_t smooth_width = 0;      // centered moving average; 0 = off
  double log_gamma_threshold = 0.15;  // logarithmic model needs gamma below this
};

GammaFit fit_gamma(const TimeSeries& series, const FitOptions& options = {});

// --------------------------------------------------------------------------
// The seven spreading regimes.
enum class Regime {
  SuperBallistic,
  Ballistic,
  SubBallistic,
  Diffusive,
  SubDiffusive,
  Logarithmic,
  Localized,
};

Regime classify(const GammaFit& fit, double tol = 0.05);
const char* regime_name(Regime regime);

// Primary-resonance prediction: gamma = 1 - alpha, logarithmic at alpha = 1.
struct GammaPrediction {
  double gamma = 0.0;
  bool logarithmic = false;
};

GammaPrediction predicted_gamma(double alpha);

}  // namespace qkr
