#include "qkr/phase.hpp"

#include <cmath>

namespace qkr {

PhaseTable make_phase_table(const ResonanceParams& r) {
  PhaseTable t;
  t.p = r.p;
  t.q = r.q;
  t.phases.resize(r.q);
  for (std::int64_t k = 0; k < r.q; ++k) {
    const double angle = -kTwoPi * static_cast<double>(k) / static_cast<double>(r.q);
    t.phases(k) = std::polar(1.0, angle);
  }
  t.phases(0) = Complex{1.0, 0.0};
  return t;
}

}  // namespace qkr
