#pragma once

#include <cstdint>

namespace odsim {

/// N transmitters, each sending D bits at rate M once per period T.
struct CollisionParams {
  double bits{0.0};
  double rate_bps{0.0};
  double period_s{0.0};
  std::uint64_t transmitters{1};

  /// Transmission time D / M.
  double airtime_s() const { return bits / rate_bps; }
};

struct CollisionResult {
  double p_collision;
  double p_ok;
};

/// Pairwise collision probability for uniformly placed transmissions, and the
/// probability that no pair collides. The simple form is 2H/T; the refined
/// form accounts for transmissions straddling the period edge:
/// (6HT - 4H^2) / (2T^2). Throws ModelError unless H < T.
CollisionResult collision_prob(const CollisionParams& params, bool refined);

}  // namespace odsim
