#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "odsim/cli/commands.hpp"

namespace odsim::cli {

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"odsim: opportunistic content dissemination simulator for urban areas"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a synthetic trace file");
  g->add_option("--map", gen.map, "'reference' or a map file")->capture_default_str();
  g->add_option("--scenario", gen.scenario, "Take map, populations, duration, slot and seed from a scenario file");
  g->add_option("--fixed", gen.fixed, "Fixed nodes")->capture_default_str();
  g->add_option("--vehicles", gen.vehicles, "Vehicular nodes")->capture_default_str();
  g->add_option("--pedestrians", gen.pedestrians, "Pedestrian nodes")->capture_default_str();
  g->add_option("--elevators", gen.elevators, "Elevator nodes")->capture_default_str();
  g->add_option("--elevator-stop", gen.elevator_stop_s, "Elevator stop time (s)")->capture_default_str();
  g->add_option("--duration", gen.duration_s, "Simulated seconds")->capture_default_str();
  g->add_option("--slot", gen.slot_s, "Slot length (s)")->capture_default_str();
  g->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  g->add_option("--out,-o", gen.out, "Output trace file")->required();

  RunArgs runa;
  auto* r = app.add_subcommand("run", "Run one scenario and write metrics CSVs");
  r->add_option("scenario", runa.scenario, "Scenario file")->required();
  r->add_option("--seed", runa.seed, "Override the scenario seed");
  r->add_option("--set", runa.overrides, "key=value override (repeatable)");
  r->add_option("--out,-o", runa.out_dir, "Output directory")->capture_default_str();

  SweepArgs sw;
  auto* s = app.add_subcommand("sweep", "Run every point x seed of a sweep file");
  s->add_option("sweep", sw.sweep, "Sweep file")->required();
  s->add_option("--jobs,-j", sw.jobs, "Parallel runs")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--out,-o", sw.out_dir, "Output directory")->capture_default_str();

  CollisionArgs col;
  auto* c = app.add_subcommand("collision", "Collision probability of N periodic transmitters");
  c->add_option("D", col.bits, "Bits per transmission")->required();
  c->add_option("M", col.rate_bps, "Channel rate (bit/s)")->required();
  c->add_option("T", col.period_s, "Transmission period (s)")->required();
  c->add_option("N", col.transmitters, "Number of transmitters")->required();
  c->add_flag("--refined", col.refined, "Account for transmissions straddling the period edge");

  ReplayArgs rep;
  auto* rc = app.add_subcommand("replay-check", "Run a scenario twice and compare the outputs");
  rc->add_option("scenario", rep.scenario, "Scenario file")->required();
  rc->add_option("--seed", rep.seed, "Override the scenario seed");
  rc->add_option("--set", rep.overrides, "key=value override (repeatable)");
  rc->add_option("--against", rep.against, "summary.csv from an earlier run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    app.exit(e, o, e2);
    err << e2.str() << o.str();
    return kUsage;
  }

  if (*g) return cmd_generate(gen, out, err);
  if (*r) return cmd_run(runa, out, err);
  if (*s) return cmd_sweep(sw, out, err);
  if (*c) return cmd_collision(col, out, err);
  return cmd_replay_check(rep, out, err);
}

}  // namespace odsim::cli
