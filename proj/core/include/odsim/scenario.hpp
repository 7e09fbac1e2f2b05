#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "odsim/movers.hpp"
#include "odsim/node.hpp"
#include "odsim/propagation.hpp"

namespace odsim {

enum class CiPooling { PerSample, PerNode };

struct KindConfig {
  std::size_t population{0};
  KindParams params;
  double threshold_db{-30.0};
};

struct RoiTableConfig {
  /// Number of static ROIs shared by the population.
  std::size_t count{1};
  /// Explicit centres; when empty, centres are drawn among accessible tiles.
  std::vector<Point2> centers;
  double sync_period_s{3600.0};
  /// Draw a fresh table at every synchronous update (drawn tables only).
  bool redraw{true};
  double async_min_s{3000.0};
  double async_max_s{4200.0};
  double relink_period_s{600.0};
};

/// Complete description of one run. Defaults reproduce the reference setup:
/// 550 x 500 m block map, 25 m tiles, 0.2 s slots, 3 h, 54 F / 50 V / 200 P.
struct Scenario {
  std::string map{"reference"};
  double tile_side_m{25.0};
  double slot_len_s{0.2};
  double start_s{0.0};
  double end_s{10800.0};
  double transient_s{900.0};
  double sample_period_s{10.0};
  std::uint64_t seed{1};
  /// Info update period; infinite for static information.
  double info_update_s{HUGE_VAL};
  /// Trace file; empty to generate traces from the mobility models.
  std::string trace;
  CiPooling ci_pooling{CiPooling::PerSample};

  LossModel loss;
  LossSource loss_source{LossSource::Model};
  std::string loss_file;

  RoiTableConfig roi;
  PedestrianParams pedestrian;
  VehicleParams vehicle;
  double elevator_stop_s{60.0};
  double elevator_speed_floors_per_s{1.0};

  std::array<KindConfig, 4> kinds;

  Scenario();

  KindConfig& kind(NodeKind k) { return kinds[kind_index(k)]; }
  const KindConfig& kind(NodeKind k) const { return kinds[kind_index(k)]; }
  std::size_t total_population() const;
  ContactThresholds thresholds() const;
  InfoDynamics info_dynamics() const;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
};

/// Sets one `key = value` entry. Throws ConfigError naming an unknown key or a
/// malformed value.
void apply_setting(Scenario& s, std::string_view key, std::string_view value);

/// Every accepted key, in canonical order.
std::vector<std::string> setting_keys();

/// One `key = value` line per setting in canonical order.
std::string canonical_text(const Scenario& s, bool include_seed = false);

/// FNV-1a 64 of the canonical text without the seed.
std::uint64_t scenario_digest(const Scenario& s);
std::string digest_hex(std::uint64_t digest);

}  // namespace odsim
