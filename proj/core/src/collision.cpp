#include "odsim/collision.hpp"

#include <cmath>

#include "odsim/error.hpp"

namespace odsim {

CollisionResult collision_prob(const CollisionParams& p, bool refined) {
  if (!(p.bits > 0.0) || !(p.rate_bps > 0.0) || !(p.period_s > 0.0)) {
    throw ModelError("D, M and T must all be positive");
  }
  if (p.transmitters < 1) throw ModelError("at least one transmitter is required");
  const double h = p.airtime_s();
  const double t = p.period_s;
  if (!(h < t)) throw ModelError("transmission time D/M must be shorter than the period T");
  const double pc = refined ? (6.0 * h * t - 4.0 * h * h) / (2.0 * t * t) : 2.0 * h / t;
  const double n = static_cast<double>(p.transmitters);
  const double pairs = n * (n - 1.0) / 2.0;
  return {pc, std::pow(1.0 - pc, pairs)};
}

}  // namespace odsim
