#include "qkr/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qkr {

std::pair<double, double> moments(const WaveState& state) {
  const Eigen::ArrayXd probs = state.amplitudes.array().abs2();
  const Eigen::ArrayXd l = Eigen::ArrayXd::LinSpaced(
      state.size(), static_cast<double>(state.l_min), static_cast<double>(state.l_max()));
  const double m1 = (l * probs).sum();
  const double m2 = (l * l * probs).sum();
  return {m1, m2};
}

double energy(const WaveState& state, double epsilon) {
  if (!(epsilon > 0.0)) throw validation_error("energy requires epsilon > 0");
  return epsilon * moments(state).second;
}

AnalyticMoments analytic_moments(const InitialCondition& ic, double n_star) {
  validate_initial(ic);
  // Initial amplitudes as a dense window indexed by l.
  std::int64_t lo = 0, hi = 0;
  VectorXcd a;
  if (const auto* d = std::get_if<DeltaInitial>(&ic)) {
    lo = hi = d->m;
    a = VectorXcd::Ones(1);
  } else {
    const auto& c = std::get<CustomInitial>(ic);
    lo = c.offset;
    hi = c.offset + c.amplitudes.size() - 1;
    a = c.amplitudes / c.amplitudes.norm();
  }
  const auto amp = [&](std::int64_t l) -> Complex {
    return (l < lo || l > hi) ? Complex{0.0, 0.0} : a(l - lo);
  };

  double m1_0 = 0.0, m2_0 = 0.0;
  double im_down = 0.0;   // sum Im[a_j a*_{j-1}]
  double re_skip = 0.0;   // sum Re[a_j a*_{j+2}]
  double im_up_w = 0.0;   // sum (2j+1) Im[a_j a*_{j+1}]
  for (std::int64_t j = lo; j <= hi; ++j) {
    const Complex aj = amp(j);
    const double pj = std::norm(aj);
    m1_0 += static_cast<double>(j) * pj;
    m2_0 += static_cast<double>(j) * static_cast<double>(j) * pj;
    im_down += std::imag(aj * std::conj(amp(j - 1)));
    re_skip += std::real(aj * std::conj(amp(j + 2)));
    im_up_w += static_cast<double>(2 * j + 1) * std::imag(aj * std::conj(amp(j + 1)));
  }

  AnalyticMoments out;
  out.m1 = -n_star * im_down + m1_0;
  out.m2 = 0.5 * n_star * n_star * (1.0 - re_skip) + n_star * im_up_w + m2_0;
  out.sigma = sigma_from_moments(out.m1, out.m2);
  return out;
}

namespace {

struct LinFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LinFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

}  // namespace

GammaFit fit_gamma(const TimeSeries& series, const FitOptions& options) {
  if (options.window_len < 2) throw fit_error("fit window must hold at least 2 points");

  // Records with n >= 1, in step order.
  std::vector<const MomentRecord*> recs;
  recs.reserve(series.records.size());
  for (const auto& r : series.records) {
    if (r.n >= 1) recs.push_back(&r);
  }
  if (static_cast<std::int64_t>(recs.size()) < options.window_len) {
    throw fit_error("series has " + std::to_string(recs.size()) + " usable records, need " +
                    std::to_string(options.window_len));
  }

  std::vector<double> sigma(recs.size());
  for (size_t i = 0; i < recs.size(); ++i) sigma[i] = recs[i]->sigma;
  if (options.smooth_width > 1) {
    const std::int64_t radius = options.smooth_width / 2;
    std::vector<double> smoothed(sigma.size());
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(sigma.size()); ++i) {
      const std::int64_t lo = std::max<std::int64_t>(0, i - radius);
      const std::int64_t hi = std::min<std::int64_t>(sigma.size() - 1, i + radius);
      double acc = 0.0;
      for (std::int64_t k = lo; k <= hi; ++k) acc += sigma[k];
      smoothed[i] = acc / static_cast<double>(hi - lo + 1);
    }
    sigma.swap(smoothed);
  }

  const size_t first = recs.size() - static_cast<size_t>(options.window_len);
  std::vector<double> ln_n, ln_sigma, sig;
  ln_n.reserve(options.window_len);
  for (size_t i = first; i < recs.size(); ++i) {
    if (!(sigma[i] > 0.0)) {
      throw fit_error("non-positive sigma at n=" + std::to_string(recs[i]->n) +
                      "; degenerate run");
    }
    ln_n.push_back(std::log(static_cast<double>(recs[i]->n)));
    ln_sigma.push_back(std::log(sigma[i]));
    sig.push_back(sigma[i]);
  }

  const LinFit power = least_squares(ln_n, ln_sigma);
  const LinFit logm = least_squares(ln_n, sig);

  double mean_sigma = 0.0;
  for (const double s : sig) mean_sigma += s;
  mean_sigma /= static_cast<double>(sig.size());

  double ss_power = 0.0, ss_log = 0.0;
  for (size_t i = 0; i < sig.size(); ++i) {
    const double fit_p = std::exp(power.intercept + power.slope * ln_n[i]);
    const double fit_l = logm.intercept + logm.slope * ln_n[i];
    ss_power += (sig[i] - fit_p) * (sig[i] - fit_p);
    ss_log += (sig[i] - fit_l) * (sig[i] - fit_l);
  }
  const auto count = static_cast<double>(sig.size());

  GammaFit fit;
  fit.gamma = power.slope;
  fit.log_amplitude = power.intercept;
  fit.n_lo = recs[first]->n;
  fit.n_hi = recs.back()->n;
  fit.power_rms = std::sqrt(ss_power / count) / mean_sigma;
  fit.log_rms = std::sqrt(ss_log / count) / mean_sigma;
  fit.log_slope = logm.slope;
  fit.log_intercept = logm.intercept;
  const bool logarithmic =
      fit.log_rms < fit.power_rms && fit.gamma < options.log_gamma_threshold;
  fit.model = logarithmic ? FitModel::Logarithmic : FitModel::PowerLaw;
  fit.rms_residual = logarithmic ? fit.log_rms : fit.power_rms;
  return fit;
}

Regime classify(const GammaFit& fit, double tol) {
  if (!(tol > 0.0) || tol > 0.2) throw validation_error("classify tol must be in (0, 0.2]");
  if (fit.model == FitModel::Logarithmic) return Regime::Logarithmic;
  const double g = fit.gamma;
  if (g > 1.0 + tol) return Regime::SuperBallistic;
  if (std::abs(g - 1.0) <= tol) return Regime::Ballistic;
  if (g > 0.5 + tol && g < 1.0 - tol) return Regime::SubBallistic;
  if (std::abs(g - 0.5) <= tol) return Regime::Diffusive;
  if (g > tol && g < 0.5 - tol) return Regime::SubDiffusive;
  return Regime::Localized;
}

const char* regime_name(Regime regime) {
  switch (regime) {
    case Regime::SuperBallistic: return "super-ballistic";
    case Regime::Ballistic: return "ballistic";
    case Regime::SubBallistic: return "sub-ballistic";
    case Regime::Diffusive: return "diffusive";
    case Regime::SubDiffusive: return "sub-diffusive";
    case Regime::Logarithmic: return "logarithmic";
    case Regime::Localized: return "localized";
  }
  return "unknown";
}

GammaPrediction predicted_gamma(double alpha) {
  if (alpha == 1.0) return {0.0, true};
  return {1.0 - alpha, false};
}

}  // namespace qkr
