#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "odsim/scenario.hpp"

namespace odsim::cli {

inline constexpr std::string_view kScenarioSchema = "odsim-scenario/1";
inline constexpr std::string_view kSweepSchema = "odsim-sweep/1";

/// Applies one preset expression such as "reference", "delayed(60)",
/// "floor(1)", "walk(1)", "elevators(60, 36)" or several joined with '+'.
void apply_preset(Scenario& s, std::string_view expr);

/// `key = value` document whose first non-comment line is the schema line.
/// A `preset = ...` line applies presets at that point. Relative map, trace
/// and loss paths resolve against `base_dir`.
Scenario parse_scenario(std::istream& in, const std::string& source, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Applies "key=value" overrides, e.g. from the command line.
void apply_overrides(Scenario& s, const std::vector<std::string>& overrides, const std::filesystem::path& base_dir = {});

struct SweepSpec {
  Scenario base;
  std::string axis;
  std::vector<std::string> values;
  std::vector<std::uint64_t> seeds;
};

/// schema line, then `base`, `axis`, `values`, `seeds` and optional `set` lines.
SweepSpec parse_sweep(std::istream& in, const std::string& source, const std::filesystem::path& base_dir = {});
SweepSpec load_sweep(const std::filesystem::path& path);

}  // namespace odsim::cli
