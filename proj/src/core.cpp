#include "qkr/core.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

namespace qkr {

ResonanceParams make_resonance(std::int64_t p, std::int64_t q) {
  if (p < 1 || q < 1) {
    throw validation_error("resonance requires p >= 1 and q >= 1, got p=" +
                           std::to_string(p) + " q=" + std::to_string(q));
  }
  const std::int64_t g = std::gcd(p, q);
  ResonanceParams r;
  r.p = p / g;
  r.q = q / g;
  r.tau = kTwoPi * static_cast<double>(r.p) / static_cast<double>(r.q);
  return r;
}

void validate_schedule(const KickSchedule& schedule) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PowerLawSchedule>) {
          if (!(s.kappa0 > 0.0)) throw validation_error("power-law schedule requires kappa0 > 0");
          if (!std::isfinite(s.alpha)) throw validation_error("power-law alpha must be finite");
        } else if constexpr (std::is_same_v<T, ConstantSchedule>) {
          if (!(s.kappa0 > 0.0)) throw validation_error("constant schedule requires kappa0 > 0");
        } else {
          for (Eigen::Index i = 0; i < s.values.size(); ++i) {
            if (!(s.values(i) >= 0.0) || !std::isfinite(s.values(i))) {
              throw validation_error("explicit schedule values must be finite and >= 0 (line " +
                                     std::to_string(i + 1) + ")");
            }
          }
        }
      },
      schedule);
}

double kick_strength(const KickSchedule& schedule, std::int64_t n) {
  if (n < 1) throw domain_error("kick_strength requires n >= 1, got n=" + std::to_string(n));
  return std::visit(
      [n](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PowerLawSchedule>) {
          return s.kappa0 * std::pow(static_cast<double>(n), -s.alpha);
        } else if constexpr (std::is_same_v<T, ConstantSchedule>) {
          return s.kappa0;
        } else {
          if (n > s.values.size()) {
            throw domain_error("step " + std::to_string(n) + " past explicit schedule of length " +
                               std::to_string(s.values.size()));
          }
          return s.values(n - 1);
        }
      },
      schedule);
}

double cumulative_kick(const KickSchedule& schedule, std::int64_t n) {
  if (n < 0) throw domain_error("cumulative_kick requires n >= 0");
  // Kahan summation; keeps n* exact enough for 1e-8 series comparisons.
  double sum = 0.0, comp = 0.0;
  for (std::int64_t m = 1; m <= n; ++m) {
    const double y = kick_strength(schedule, m) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

std::optional<std::int64_t> schedule_length(const KickSchedule& schedule) {
  if (const auto* e = std::get_if<ExplicitSchedule>(&schedule)) {
    return static_cast<std::int64_t>(e->values.size());
  }
  return std::nullopt;
}

ExplicitSchedule load_schedule_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open schedule file: " + path.string());
  std::vector<double> vals;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line.substr(first));
    double v = 0.0;
    if (!(ss >> v)) {
      throw validation_error("bad value in " + path.string() + " line " + std::to_string(lineno));
    }
    vals.push_back(v);
  }
  ExplicitSchedule s;
  s.values = Eigen::Map<const VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
  validate_schedule(KickSchedule{s});
  return s;
}

void validate_initial(const InitialCondition& ic) {
  if (const auto* c = std::get_if<CustomInitial>(&ic)) {
    if (c->amplitudes.size() == 0) throw validation_error("custom initial condition is empty");
    const double norm = c->amplitudes.norm();
    if (std::abs(norm - 1.0) > 1e-12) {
      throw validation_error("custom initial condition must have unit norm within 1e-12, got " +
                             std::to_string(norm));
    }
  }
}

std::int64_t support_radius(const InitialCondition& ic) {
  return std::visit(
      [](const auto& c) -> std::int64_t {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, DeltaInitial>) {
          return std::abs(c.m);
        } else {
          const std::int64_t lo = c.offset;
          const std::int64_t hi = c.offset + c.amplitudes.size() - 1;
          return std::max(std::abs(lo), std::abs(hi));
        }
      },
      ic);
}

WaveState initial_state(const InitialCondition& ic, std::int64_t halfwidth) {
  validate_initial(ic);
  if (halfwidth < 0) throw validation_error("halfwidth must be >= 0");
  if (support_radius(ic) > halfwidth) {
    throw truncation_error("initial support radius " + std::to_string(support_radius(ic)) +
                           " exceeds halfwidth " + std::to_string(halfwidth));
  }
  WaveState st;
  st.l_min = -halfwidth;
  st.amplitudes = VectorXcd::Zero(2 * halfwidth + 1);
  std::visit(
      [&st](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, DeltaInitial>) {
          st.amplitudes(c.m - st.l_min) = Complex{1.0, 0.0};
        } else {
          for (Eigen::Index i = 0; i < c.amplitudes.size(); ++i) {
            st.amplitudes(c.offset + i - st.l_min) = c.amplitudes(i);
          }
          st.amplitudes /= st.amplitudes.norm();  // absorb the <=1e-12 residual
        }
      },
      ic);
  return st;
}

void validate_policy(const TruncationPolicy& policy) {
  if (!(policy.edge_threshold > 0.0)) throw validation_error("edge_threshold must be > 0");
  if (policy.growth_chunk < 1) throw validation_error("growth_chunk must be >= 1");
  if (policy.max_halfwidth < 1) throw validation_error("max_halfwidth must be >= 1");
}

void validate_config(const RunConfig& config) {
  if (config.resonance.p < 1 || config.resonance.q < 1) {
    throw validation_error("invalid resonance parameters");
  }
  validate_schedule(config.schedule);
  validate_initial(config.initial);
  validate_policy(config.truncation);
  if (config.steps < 0) throw validation_error("steps must be >= 0");
  if (std::holds_alternative<AnalyticBackend>(config.backend) && !config.resonance.is_primary()) {
    throw validation_error("analytic backend is only defined for primary resonances (q = 1)");
  }
  if (const auto* sp = std::get_if<SpectralBackend>(&config.backend)) {
    if (sp->grid_size < 0 ||
        (sp->grid_size > 0 && (sp->grid_size & (sp->grid_size - 1)) != 0)) {
      throw validation_error("spectral grid_size must be 0 (auto) or a power of two");
    }
    if (!(sp->tail_tol > 0.0)) throw validation_error("tail_tol must be > 0");
  }
  if (const auto* b = std::get_if<BandedBackend>(&config.backend)) {
    if (!(b->tail_tol > 0.0)) throw validation_error("tail_tol must be > 0");
  }
  if (const auto len = schedule_length(config.schedule)) {
    if (config.steps > *len) {
      throw validation_error("steps " + std::to_string(config.steps) +
                             " exceeds explicit schedule length " + std::to_string(*len));
    }
  }
  for (const auto s : config.snapshot_steps) {
    if (s < 0 || s > config.steps) {
      throw validation_error("snapshot step " + std::to_string(s) + " outside [0, steps]");
    }
  }
}

}  // namespace qkr
