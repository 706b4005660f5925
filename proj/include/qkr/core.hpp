#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <variant>

#include "qkr/errors.hpp"

namespace qkr {

using Complex = std::complex<double>;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// --------------------------------------------------------------------------
// Resonance condition tau = 2*pi*p/q, stored as a reduced fraction.
// The fraction is the ground truth; tau is derived and never inverted.
struct ResonanceParams {
  std::int64_t p = 1;
  std::int64_t q = 1;
  double tau = kTwoPi;

  bool is_primary() const { return q == 1; }
};

ResonanceParams make_resonance(std::int64_t p, std::int64_t q);

// --------------------------------------------------------------------------
// Kick-strength schedules kappa(n), defined for steps n >= 1.
struct PowerLawSchedule {
  double kappa0 = 1.0;  // > 0
  double alpha = 0.0;   // any real; kappa(n) = kappa0 * n^(-alpha)
};

struct ConstantSchedule {
  double kappa0 = 1.0;  // > 0
};

struct ExplicitSchedule {
  VectorXd values;  // values[i] = kappa(i+1), all >= 0
};

using KickSchedule = std::variant<PowerLawSchedule, ConstantSchedule, ExplicitSchedule>;

// Throws validation_error on non-positive kappa0 or negative explicit values.
void validate_schedule(const KickSchedule& schedule);

// kappa(n) for n >= 1. Throws domain_error outside an explicit schedule.
double kick_strength(const KickSchedule& schedule, std::int64_t n);

// n*(n) = sum_{m=1..n} kappa(m); n*(0) = 0.
double cumulative_kick(const KickSchedule& schedule, std::int64_t n);

// Number of defined steps, or nullopt for unbounded schedules.
std::optional<std::int64_t> schedule_length(const KickSchedule& schedule);

// Plain-text schedule file: one non-negative decimal per line, '#' comments
// and blank lines ignored.
ExplicitSchedule load_schedule_file(const std::filesystem::path& path);

// --------------------------------------------------------------------------
// Initial conditions on the angular-momentum lattice.
struct DeltaInitial {
  std::int64_t m = 0;  // a_l(0) = delta_{l m}
};

struct CustomInitial {
  VectorXcd amplitudes;     // entry i is amplitude at l = offset + i
  std::int64_t offset = 0;  // lattice index of amplitudes[0]
};

using InitialCondition = std::variant<DeltaInitial, CustomInitial>;

// Throws validation_error unless the L2 norm is 1 within 1e-12.
void validate_initial(const InitialCondition& ic);

// Largest |l| carrying initial amplitude.
std::int64_t support_radius(const InitialCondition& ic);

// --------------------------------------------------------------------------
// Truncated wave function over a contiguous angular-momentum lattice.
// Entry i of amplitudes holds a_l with l = l_min + i.
struct WaveState {
  VectorXcd amplitudes;
  std::int64_t l_min = 0;
  std::int64_t step = 0;
  double leaked_norm = 0.0;

  std::int64_t size() const { return amplitudes.size(); }
  std::int64_t l_max() const { return l_min + size() - 1; }

  double norm_sq() const { return amplitudes.squaredNorm(); }

  Complex at(std::int64_t l) const {
    if (l < l_min || l > l_max()) return {0.0, 0.0};
    return amplitudes(l - l_min);
  }
  double prob(std::int64_t l) const { return std::norm(at(l)); }
};

// Normalized state at step 0 on the lattice [-halfwidth, halfwidth].
// Throws truncation_error if the support does not fit.
WaveState initial_state(const InitialCondition& ic, std::int64_t halfwidth);

// --------------------------------------------------------------------------
// Lattice truncation policy shared by the numeric back-ends.
struct TruncationPolicy {
  double edge_threshold = 1e-14;          // clip budget at max_halfwidth
  std::int64_t growth_chunk = 64;         // lattice growth granularity
  std::int64_t max_halfwidth = 1 << 20;   // hard lattice cap
};

void validate_policy(const TruncationPolicy& policy);

// --------------------------------------------------------------------------
// Evolution back-end selection.
struct AnalyticBackend {};  // closed form; primary resonances only

struct BandedBackend {
  double tail_tol = 1e-28;  // squared-amplitude tail kept out of the band
};

struct SpectralBackend {
  std::int64_t grid_size = 0;  // DFT size (power of two); 0 = auto per step
  double tail_tol = 1e-28;     // shared with banded for lattice growth
};

using StepBackend = std::variant<AnalyticBackend, BandedBackend, SpectralBackend>;

struct RunConfig {
  ResonanceParams resonance;
  KickSchedule schedule = PowerLawSchedule{};
  InitialCondition initial = DeltaInitial{};
  std::int64_t steps = 0;
  StepBackend backend = BandedBackend{};
  TruncationPolicy truncation;
  std::set<std::int64_t> snapshot_steps;
};

// Cross-field validation (analytic => primary, steps within explicit
// schedules, ...). Throws validation_error.
void validate_config(const RunConfig& config);

}  // namespace qkr
