#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace odsim::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kInput = 3, kRuntime = 4 };

/// Raised for argument combinations rejected before any work starts.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenerateArgs {
  std::string map{"reference"};
  std::optional<std::filesystem::path> scenario;
  std::size_t fixed{54};
  std::size_t vehicles{50};
  std::size_t pedestrians{200};
  std::size_t elevators{0};
  double elevator_stop_s{60.0};
  double duration_s{10800.0};
  double slot_s{0.2};
  std::uint64_t seed{1};
  std::filesystem::path out;
};

struct RunArgs {
  std::filesystem::path scenario;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  std::filesystem::path out_dir{"."};
};

struct SweepArgs {
  std::filesystem::path sweep;
  unsigned jobs{1};
  std::filesystem::path out_dir{"."};
};

struct CollisionArgs {
  double bits{0.0};
  double rate_bps{0.0};
  double period_s{0.0};
  std::uint64_t transmitters{1};
  bool refined{false};
};

struct ReplayArgs {
  std::filesystem::path scenario;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  /// summary.csv of an earlier run to compare against.
  std::optional<std::filesystem::path> against;
};

/// Each command reports on `out`/`err` and returns an ExitCode.
int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err);
int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);
int cmd_collision(const CollisionArgs& args, std::ostream& out, std::ostream& err);
int cmd_replay_check(const ReplayArgs& args, std::ostream& out, std::ostream& err);

/// Parses argv with the full subcommand surface and dispatches.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace odsim::cli
