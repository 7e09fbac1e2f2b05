#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "odsim/cli/commands.hpp"
#include "odsim/cli/scenario_file.hpp"
#include "odsim/error.hpp"
#include "odsim/trace.hpp"

using namespace odsim;
using namespace odsim::cli;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir(const std::string& name) {
  const char* env = std::getenv("ODSIM_TEST_TMP");
  const fs::path root = env ? fs::path(env) : fs::temp_directory_path() / "odsim_cli_tests";
  const fs::path d = root / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

std::string read(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "odsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const char* kSmall =
    "schema = odsim-scenario/1\n"
    "# a short run\n"
    "end = 120\n"
    "transient = 20\n"
    "sample_period = 10\n"
    "F.population = 2\n"
    "V.population = 3\n"
    "P.population = 6\n";

}  // namespace

TEST(ScenarioFile, ParsesSettingsAndPresets) {
  std::istringstream in(std::string(kSmall) + "preset = delayed(60) + floor(1)\n");
  const Scenario s = parse_scenario(in, "s.txt");
  EXPECT_DOUBLE_EQ(s.end_s, 120.0);
  EXPECT_EQ(s.kind(NodeKind::Pedestrian).population, 6u);
  EXPECT_DOUBLE_EQ(s.kind(NodeKind::Pedestrian).params.policy.schedule.period_s, 60.0);
  EXPECT_EQ(s.kind(NodeKind::Pedestrian).params.policy.schedule.context, ContextPolicy::Floor);
  EXPECT_DOUBLE_EQ(s.kind(NodeKind::Pedestrian).params.policy.schedule.wake_s, 1.0);
}

TEST(ScenarioFile, ReferencePresetResetsEverything) {
  Scenario s;
  apply_preset(s, "delayed(inf)");
  EXPECT_TRUE(std::isinf(s.kind(NodeKind::Pedestrian).params.policy.schedule.period_s));
  apply_preset(s, "reference");
  EXPECT_EQ(scenario_digest(s), scenario_digest(Scenario{}));
}

TEST(ScenarioFile, ElevatorPreset) {
  Scenario s;
  apply_preset(s, "elevators(5, 36)");
  EXPECT_EQ(s.kind(NodeKind::Elevator).population, 36u);
  EXPECT_DOUBLE_EQ(s.elevator_stop_s, 5.0);
  EXPECT_THROW(apply_preset(s, "elevators(5)"), ConfigError);
  EXPECT_THROW(apply_preset(s, "teleport(1)"), ConfigError);
}

TEST(ScenarioFile, UnknownKeyReportsItsLine) {
  std::istringstream in("schema = odsim-scenario/1\nend = 10\n\nwarp_factor = 9\n");
  try {
    parse_scenario(in, "s.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_NE(std::string(e.what()).find("warp_factor"), std::string::npos);
  }
}

TEST(ScenarioFile, SchemaLineIsRequired) {
  std::istringstream missing("end = 10\n");
  EXPECT_THROW(parse_scenario(missing, "s.txt"), ParseError);
  std::istringstream wrong("schema = odsim-scenario/9\n");
  EXPECT_THROW(parse_scenario(wrong, "s.txt"), ParseError);
  std::istringstream twice("schema = odsim-scenario/1\nschema = odsim-scenario/1\n");
  EXPECT_THROW(parse_scenario(twice, "s.txt"), ParseError);
}

TEST(ScenarioFile, CanonicalTextRoundTrips) {
  std::istringstream in(kSmall);
  const Scenario s = parse_scenario(in, "s.txt");
  std::istringstream again("schema = odsim-scenario/1\n" + canonical_text(s, true));
  const Scenario t = parse_scenario(again, "t.txt");
  EXPECT_EQ(canonical_text(s, true), canonical_text(t, true));
}

TEST(Generate, IsDeterministic) {
  const fs::path d = tmp_dir("generate");
  const std::vector<std::string> common{"generate", "--fixed", "2", "--vehicles", "2", "--pedestrians", "3",
                                        "--duration", "20", "--seed", "4"};
  auto a = common;
  a.insert(a.end(), {"--out", (d / "a.trace").string()});
  auto b = common;
  b.insert(b.end(), {"--out", (d / "b.trace").string()});
  ASSERT_EQ(invoke(a).code, kOk);
  const Result rb = invoke(b);
  ASSERT_EQ(rb.code, kOk);
  EXPECT_EQ(rb.out, "records 700\n");
  EXPECT_EQ(read(d / "a.trace"), read(d / "b.trace"));
  TraceHeader h;
  const auto recs = load_traces(d / "a.trace", &h);
  EXPECT_EQ(recs.size(), 700u);
  EXPECT_DOUBLE_EQ(h.width_m, 550.0);
}

TEST(Generate, EmptyPopulationWritesOnlyTheHeader) {
  const fs::path d = tmp_dir("generate_empty");
  const Result r = invoke({"generate", "--fixed", "0", "--vehicles", "0", "--pedestrians", "0", "--duration", "10",
                        "--out", (d / "e.trace").string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  const std::string text = read(d / "e.trace");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_EQ(text.rfind("# odsim-trace 1", 0), 0u);
}

TEST(Generate, MissingOutIsAUsageError) {
  EXPECT_EQ(invoke({"generate"}).code, kUsage);
  EXPECT_EQ(invoke({"no-such-command"}).code, kUsage);
}

TEST(Run, WritesAllOutputs) {
  const fs::path d = tmp_dir("run");
  write(d / "s.txt", kSmall);
  const Result r = invoke({"run", (d / "s.txt").string(), "--out", (d / "out").string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  for (const char* f : {"summary.csv", "coverage_timeseries.csv", "fx.csv", "transmissions.csv"}) {
    EXPECT_TRUE(fs::exists(d / "out" / f)) << f;
  }
  const std::string summary = read(d / "out" / "summary.csv");
  EXPECT_NE(summary.find(",P,6,"), std::string::npos) << summary;
  EXPECT_NE(summary.find(",V,3,"), std::string::npos) << summary;
  EXPECT_EQ(summary.find(",E,"), std::string::npos) << summary;
  const std::string tx = read(d / "out" / "transmissions.csv");
  EXPECT_NE(tx.find("P,3600,3600,0\n"), std::string::npos) << tx;
}

TEST(Run, DelayedInfinityNeverTransmits) {
  const fs::path d = tmp_dir("run_inf");
  write(d / "s.txt", std::string(kSmall) + "preset = delayed(inf)\n");
  const Result r = invoke({"run", (d / "s.txt").string(), "--out", d.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(read(d / "transmissions.csv").find("P,0,0,0\n"), std::string::npos);
}

TEST(Run, OverridesAndSeed) {
  const fs::path d = tmp_dir("run_over");
  write(d / "s.txt", kSmall);
  const Result r = invoke({"run", (d / "s.txt").string(), "--seed", "9", "--set", "P.population=2", "--out", d.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find(" seed 9\n"), std::string::npos);
  EXPECT_NE(r.out.find(",P,2,"), std::string::npos);
  EXPECT_EQ(invoke({"run", (d / "s.txt").string(), "--set", "bogus=1", "--out", d.string()}).code, kInput);
  EXPECT_EQ(invoke({"run", (d / "missing.txt").string()}).code, kInput);
}

TEST(Sweep, RowPerValueAndSeed) {
  const fs::path d = tmp_dir("sweep");
  write(d / "base.txt", kSmall);
  write(d / "sw.txt",
        "schema = odsim-sweep/1\nbase = base.txt\naxis = P.period\nvalues = 60 0.2\nseeds = 1 2\nset = end = 60\n");
  const Result r = invoke({"sweep", (d / "sw.txt").string(), "--jobs", "2", "--out", d.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::istringstream rows(read(d / "sweep_summary.csv"));
  std::vector<std::string> lines;
  for (std::string l; std::getline(rows, l);) lines.push_back(l);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0].rfind("axis,value,seed,digest,status", 0), 0u);
  EXPECT_EQ(lines[1].rfind("P.period,0.2,1,", 0), 0u);
  EXPECT_EQ(lines[2].rfind("P.period,0.2,2,", 0), 0u);
  EXPECT_EQ(lines[3].rfind("P.period,60,1,", 0), 0u);
  EXPECT_EQ(lines[4].rfind("P.period,60,2,", 0), 0u);
}

TEST(Sweep, EmptyAxisIsAUsageError) {
  const fs::path d = tmp_dir("sweep_empty");
  write(d / "sw.txt", "schema = odsim-sweep/1\naxis = P.period\nvalues =\n");
  EXPECT_EQ(invoke({"sweep", (d / "sw.txt").string(), "--out", d.string()}).code, kUsage);
  write(d / "sw2.txt", "schema = odsim-sweep/1\naxis = nonsense\nvalues = 1\n");
  EXPECT_EQ(invoke({"sweep", (d / "sw2.txt").string(), "--out", d.string()}).code, kUsage);
}

TEST(Collision, ReferenceCase) {
  const Result r = invoke({"collision", "1200", "10e6", "0.2", "6", "--refined"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("H 0.00012\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("p_ok 0.97"), std::string::npos) << r.out;
}

TEST(Collision, InvalidInputExitsWithInputError) {
  EXPECT_EQ(invoke({"collision", "2000", "1000", "0.2", "10"}).code, kInput);
  EXPECT_EQ(invoke({"collision", "2000", "1000000", "0.2", "0"}).code, kInput);
}

TEST(ReplayCheck, IdenticalRunsAndSummaryComparison) {
  const fs::path d = tmp_dir("replay");
  write(d / "s.txt", kSmall);
  const Result r = invoke({"replay-check", (d / "s.txt").string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find(" identical"), std::string::npos);
  ASSERT_EQ(invoke({"run", (d / "s.txt").string(), "--out", (d / "out").string()}).code, kOk);
  const Result same = invoke({"replay-check", (d / "s.txt").string(), "--against", (d / "out" / "summary.csv").string()});
  EXPECT_EQ(same.code, kOk) << same.err;
  const Result other = invoke({"replay-check", (d / "s.txt").string(), "--set", "P.k=3", "--against",
                            (d / "out" / "summary.csv").string()});
  EXPECT_EQ(other.code, kInput);
  EXPECT_NE(other.err.find("digest mismatch"), std::string::npos) << other.err;
}
