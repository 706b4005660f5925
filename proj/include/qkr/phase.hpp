#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "qkr/core.hpp"

namespace qkr {

// Free-rotor phases for tau = 2*pi*p/q. The phase of momentum j is
// exp(-2i*tau*j^2) = phases[(2*p*j^2) mod q]; the residue is computed in
// exact integer arithmetic so large j never drifts.
struct PhaseTable {
  std::int64_t p = 1;
  std::int64_t q = 1;
  VectorXcd phases;  // phases[r] = exp(-2*pi*i*r/q), phases[0] = 1 exactly
};

PhaseTable make_phase_table(const ResonanceParams& r);

inline Complex free_phase(std::int64_t j, const PhaseTable& table) {
  const std::int64_t q = table.q;
  std::int64_t jm = j % q;
  if (jm < 0) jm += q;
  const auto j2 = static_cast<std::int64_t>(
      (static_cast<unsigned __int128>(jm) * static_cast<unsigned __int128>(jm)) % q);
  const auto r = static_cast<std::int64_t>(
      (static_cast<unsigned __int128>(2 * table.p % q) * static_cast<unsigned __int128>(j2)) % q);
  return table.phases(r);
}

// (-i)^m from the exact 4-entry table, any integer m.
inline Complex ipow_neg(std::int64_t m) {
  static constexpr Complex table[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
  std::int64_t r = m % 4;
  if (r < 0) r += 4;
  return table[r];
}

}  // namespace qkr
