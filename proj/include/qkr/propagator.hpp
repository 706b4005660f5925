#pragma once

#include <cstdint>
#include <vector>

#include "qkr/core.hpp"
#include "qkr/observables.hpp"
#include "qkr/phase.hpp"

namespace qkr {

// --------------------------------------------------------------------------
// Closed-form primary-resonance state at accumulated kick n*:
//   a_l = sum_j (-i)^(l-j) a_j(0) J_{l-j}(n*).
// halfwidth must cover band_cutoff(n*, tail_tol) + support radius, else
// truncation_error names the required size.
WaveState analytic_amplitudes(const InitialCondition& ic, double n_star,
                              std::int64_t halfwidth, double tail_tol = 1e-28);

// Convenience: smallest halfwidth analytic_amplitudes accepts.
std::int64_t analytic_halfwidth(const InitialCondition& ic, double n_star,
                                double tail_tol = 1e-28);

// --------------------------------------------------------------------------
// One step of the quantum map, a_l(n+1) = sum_j i^(-(j-l)) e^(-2i tau j^2)
// J_{j-l}(kappa) a_j(n), as a banded convolution over |j-l| <= cutoff.
// The lattice is extended (in growth_chunk units) to hold the full band
// image, then edge sites below the noise floor are trimmed into leaked_norm.
WaveState step_banded(const WaveState& state, const PhaseTable& table, double kappa,
                      const TruncationPolicy& policy, double tail_tol);

// Same operator via the angle representation: free phase in momentum space,
// pointwise exp(-i kappa cos theta) on a uniform angle grid, transform back.
// grid_size = 0 picks the smallest adequate power of two per step; an
// explicit grid that cannot hold lattice + band raises aliasing_error.
WaveState step_spectral(const WaveState& state, const PhaseTable& table, double kappa,
                        const TruncationPolicy& policy, std::int64_t grid_size,
                        double tail_tol);

// --------------------------------------------------------------------------
struct Snapshot {
  std::int64_t step = 0;
  WaveState state;
};

struct EvolveResult {
  TimeSeries series;          // records 0..N (post-kick convention)
  WaveState final_state;
  std::vector<Snapshot> snapshots;
};

// Runs the configured evolution for config.steps kicks. Numeric back-ends
// advance step by step; the analytic back-end evaluates moments per step
// from the closed form and builds states only where requested. Aborts with
// numeric_error if |norm error| exceeds 1e-8.
EvolveResult evolve(const RunConfig& config);

}  // namespace qkr
