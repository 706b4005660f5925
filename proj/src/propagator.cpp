#include "qkr/propagator.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qkr/bessel.hpp"

namespace qkr {

namespace {

// Per-site probability below which edge sites are dropped. Amplitudes at
// this level (1e-16) sit under double rounding noise for normalized states,
// so trimming never perturbs cross-backend comparisons.
constexpr double kSiteFloor = 1e-32;

std::int64_t round_up_chunk(std::int64_t needed, std::int64_t chunk) {
  if (needed <= 0) return 0;
  return ((needed + chunk - 1) / chunk) * chunk;
}

std::int64_t next_pow2(std::int64_t n) {
  std::int64_t g = 1;
  while (g < n) g <<= 1;
  return g;
}

// Trim noise-floor edges into leaked_norm, then enforce max_halfwidth.
void finalize_lattice(WaveState& st, const TruncationPolicy& policy) {
  const std::int64_t n = st.size();
  std::int64_t lo = 0, hi = n - 1;
  while (lo < hi && std::norm(st.amplitudes(lo)) <= kSiteFloor) ++lo;
  while (hi > lo && std::norm(st.amplitudes(hi)) <= kSiteFloor) --hi;
  if (lo > 0 || hi < n - 1) {
    double trimmed = 0.0;
    for (std::int64_t i = 0; i < lo; ++i) trimmed += std::norm(st.amplitudes(i));
    for (std::int64_t i = hi + 1; i < n; ++i) trimmed += std::norm(st.amplitudes(i));
    st.amplitudes = st.amplitudes.segment(lo, hi - lo + 1).eval();
    st.l_min += lo;
    st.leaked_norm += trimmed;
  }

  if (st.l_min < -policy.max_halfwidth || st.l_max() > policy.max_halfwidth) {
    const std::int64_t keep_lo = std::max(st.l_min, -policy.max_halfwidth);
    const std::int64_t keep_hi = std::min(st.l_max(), policy.max_halfwidth);
    if (keep_lo > keep_hi) {
      throw resource_error("state support left the lattice cap entirely");
    }
    double clipped = 0.0;
    for (std::int64_t l = st.l_min; l < keep_lo; ++l) clipped += st.prob(l);
    for (std::int64_t l = keep_hi + 1; l <= st.l_max(); ++l) clipped += st.prob(l);
    if (clipped > policy.edge_threshold) {
      throw resource_error("lattice exceeds max_halfwidth " +
                           std::to_string(policy.max_halfwidth) + " with probability " +
                           std::to_string(clipped) + " beyond the cap");
    }
    st.amplitudes = st.amplitudes.segment(keep_lo - st.l_min, keep_hi - keep_lo + 1).eval();
    st.l_min = keep_lo;
    st.leaked_norm += clipped;
  }
}

VectorXcd phased_amplitudes(const WaveState& st, const PhaseTable& table) {
  VectorXcd c(st.size());
  for (std::int64_t i = 0; i < st.size(); ++i) {
    c(i) = free_phase(st.l_min + i, table) * st.amplitudes(i);
  }
  return c;
}

}  // namespace

std::int64_t analytic_halfwidth(const InitialCondition& ic, double n_star, double tail_tol) {
  return band_cutoff(n_star, tail_tol) + support_radius(ic);
}

WaveState analytic_amplitudes(const InitialCondition& ic, double n_star,
                              std::int64_t halfwidth, double tail_tol) {
  validate_initial(ic);
  if (!(n_star >= 0.0)) throw domain_error("analytic_amplitudes requires n_star >= 0");
  const std::int64_t required = analytic_halfwidth(ic, n_star, tail_tol);
  if (halfwidth < required) {
    throw truncation_error("halfwidth " + std::to_string(halfwidth) +
                           " too small; required " + std::to_string(required));
  }

  std::int64_t lo = 0, hi = 0;
  VectorXcd a0;
  if (const auto* d = std::get_if<DeltaInitial>(&ic)) {
    lo = hi = d->m;
    a0 = VectorXcd::Ones(1);
  } else {
    const auto& c = std::get<CustomInitial>(ic);
    lo = c.offset;
    hi = c.offset + c.amplitudes.size() - 1;
    a0 = c.amplitudes / c.amplitudes.norm();
  }

  const BesselBand band = bessel_band(n_star, halfwidth + std::max(std::abs(lo), std::abs(hi)));
  WaveState st;
  st.l_min = -halfwidth;
  st.amplitudes = VectorXcd::Zero(2 * halfwidth + 1);
  for (std::int64_t l = -halfwidth; l <= halfwidth; ++l) {
    Complex acc{0.0, 0.0};
    for (std::int64_t j = lo; j <= hi; ++j) {
      acc += ipow_neg(l - j) * a0(j - lo) * band.at(l - j);
    }
    st.amplitudes(l + halfwidth) = acc;
  }
  return st;
}

WaveState step_banded(const WaveState& state, const PhaseTable& table, double kappa,
                      const TruncationPolicy& policy, double tail_tol) {
  if (!(kappa >= 0.0)) throw domain_error("kick strength must be >= 0");
  if (!(tail_tol > 0.0)) throw validation_error("tail_tol must be > 0");

  const std::int64_t band_hw = band_cutoff(kappa, tail_tol);
  const BesselBand band = bessel_band(kappa, band_hw);

  // w(m + band_hw) = (-i)^m J_m(kappa) for m in [-band_hw, band_hw].
  VectorXcd w(2 * band_hw + 1);
  for (std::int64_t m = -band_hw; m <= band_hw; ++m) {
    w(m + band_hw) = ipow_neg(m) * band.at(m);
  }
  const VectorXcd c = phased_amplitudes(state, table);

  const std::int64_t ext = round_up_chunk(band_hw, policy.growth_chunk);
  WaveState out;
  out.l_min = state.l_min - ext;
  out.step = state.step + 1;
  out.leaked_norm = state.leaked_norm;
  const std::int64_t len_out = state.size() + 2 * ext;
  out.amplitudes.resize(len_out);

  for (std::int64_t io = 0; io < len_out; ++io) {
    const std::int64_t l = out.l_min + io;
    const std::int64_t j_lo = std::max(state.l_min, l - band_hw);
    const std::int64_t j_hi = std::min(state.l_max(), l + band_hw);
    if (j_lo > j_hi) {
      out.amplitudes(io) = Complex{0.0, 0.0};
      continue;
    }
    const std::int64_t len = j_hi - j_lo + 1;
    out.amplitudes(io) = w.segment(j_lo - l + band_hw, len)
                             .cwiseProduct(c.segment(j_lo - state.l_min, len))
                             .sum();
  }

  finalize_lattice(out, policy);
  return out;
}

WaveState step_spectral(const WaveState& state, const PhaseTable& table, double kappa,
                        const TruncationPolicy& policy, std::int64_t grid_size,
                        double tail_tol) {
  if (!(kappa >= 0.0)) throw domain_error("kick strength must be >= 0");
  if (!(tail_tol > 0.0)) throw validation_error("tail_tol must be > 0");

  const std::int64_t band_hw = band_cutoff(kappa, tail_tol);
  const std::int64_t ext = round_up_chunk(band_hw, policy.growth_chunk);
  const std::int64_t len_in = state.size();
  const std::int64_t len_out = len_in + 2 * ext;

  std::int64_t grid = grid_size;
  const std::int64_t grid_auto = next_pow2(std::max(2 * len_in + 1, len_out + 2 * band_hw + 8));
  if (grid == 0) {
    grid = grid_auto;
  } else {
    if ((grid & (grid - 1)) != 0) throw validation_error("spectral grid_size must be a power of two");
    if (grid < len_out || grid < len_in + 2 * band_hw + 1) {
      throw aliasing_error("grid " + std::to_string(grid) + " too small for lattice " +
                           std::to_string(len_in) + " plus kick band " +
                           std::to_string(band_hw) + "; need at least " +
                           std::to_string(grid_auto));
    }
  }

  const VectorXcd c = phased_amplitudes(state, table);
  VectorXcd wrapped = VectorXcd::Zero(grid);
  std::int64_t idx = ((state.l_min % grid) + grid) % grid;
  for (std::int64_t i = 0; i < len_in; ++i) {
    wrapped(idx) += c(i);
    if (++idx == grid) idx = 0;
  }

  thread_local Eigen::FFT<double> fft;  // caches plans per grid size
  VectorXcd angle(grid), back(grid);
  fft.inv(angle, wrapped);  // psi(theta_k) up to an overall 1/G that cancels below
  for (std::int64_t k = 0; k < grid; ++k) {
    const double theta = kTwoPi * static_cast<double>(k) / static_cast<double>(grid);
    angle(k) *= std::polar(1.0, -kappa * std::cos(theta));
  }
  fft.fwd(back, angle);

  WaveState out;
  out.l_min = state.l_min - ext;
  out.step = state.step + 1;
  out.leaked_norm = state.leaked_norm;
  out.amplitudes.resize(len_out);
  idx = ((out.l_min % grid) + grid) % grid;
  for (std::int64_t i = 0; i < len_out; ++i) {
    out.amplitudes(i) = back(idx);
    if (++idx == grid) idx = 0;
  }

  finalize_lattice(out, policy);
  return out;
}

EvolveResult evolve(const RunConfig& config) {
  validate_config(config);
  EvolveResult result;
  result.series.records.reserve(config.steps + 1);

  const bool analytic = std::holds_alternative<AnalyticBackend>(config.backend);

  if (analytic) {
    double n_star = 0.0, comp = 0.0;
    for (std::int64_t n = 0; n <= config.steps; ++n) {
      if (n >= 1) {
        const double y = kick_strength(config.schedule, n) - comp;
        const double t = n_star + y;
        comp = (t - n_star) - y;
        n_star = t;
      }
      const AnalyticMoments am = analytic_moments(config.initial, n_star);
      result.series.records.push_back({n, n_star, am.m1, am.m2, am.sigma, 0.0});
      if (config.snapshot_steps.count(n) != 0) {
        WaveState snap = analytic_amplitudes(config.initial, n_star,
                                             analytic_halfwidth(config.initial, n_star));
        snap.step = n;
        result.snapshots.push_back({n, std::move(snap)});
      }
    }
    result.final_state =
        analytic_amplitudes(config.initial, n_star, analytic_halfwidth(config.initial, n_star));
    result.final_state.step = config.steps;
    return result;
  }

  const PhaseTable table = make_phase_table(config.resonance);
  WaveState st = initial_state(config.initial, support_radius(config.initial) + 1);

  const auto record = [&result](std::int64_t n, double n_star, const WaveState& s) {
    const auto [m1, m2] = moments(s);
    const double err = s.norm_sq() + s.leaked_norm - 1.0;
    if (std::abs(err) > 1e-8) {
      throw numeric_error("norm error " + std::to_string(err) + " at step " + std::to_string(n) +
                          " (leaked " + std::to_string(s.leaked_norm) + ")");
    }
    result.series.records.push_back({n, n_star, m1, m2, sigma_from_moments(m1, m2), err});
  };

  record(0, 0.0, st);
  if (config.snapshot_steps.count(0) != 0) result.snapshots.push_back({0, st});

  double n_star = 0.0, comp = 0.0;
  for (std::int64_t n = 1; n <= config.steps; ++n) {
    const double kappa = kick_strength(config.schedule, n);
    const double y = kappa - comp;
    const double t = n_star + y;
    comp = (t - n_star) - y;
    n_star = t;

    if (const auto* banded = std::get_if<BandedBackend>(&config.backend)) {
      st = step_banded(st, table, kappa, config.truncation, banded->tail_tol);
    } else {
      const auto& sp = std::get<SpectralBackend>(config.backend);
      st = step_spectral(st, table, kappa, config.truncation, sp.grid_size, sp.tail_tol);
    }
    record(n, n_star, st);
    if (config.snapshot_steps.count(n) != 0) result.snapshots.push_back({n, st});
  }
  result.final_state = std::move(st);
  return result;
}

}  // namespace qkr
