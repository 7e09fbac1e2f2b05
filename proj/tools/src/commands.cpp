#include "odsim/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "odsim/cli/scenario_file.hpp"
#include "odsim/collision.hpp"
#include "odsim/engine.hpp"
#include "odsim/error.hpp"
#include "odsim/metrics.hpp"
#include "odsim/movers.hpp"
#include "odsim/text.hpp"

namespace odsim::cli {

namespace {

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kRuntime;
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

Scenario scenario_for(const std::filesystem::path& file, const std::vector<std::string>& overrides,
                      std::optional<std::uint64_t> seed) {
  Scenario s = load_scenario(file);
  apply_overrides(s, overrides);
  if (seed) s.seed = *seed;
  s.validate();
  return s;
}

std::string summary_text(const RunMetrics& m) {
  std::ostringstream out;
  write_summary_header(out);
  write_summary_rows(out, m);
  return out.str();
}

}  // namespace

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (a.out.empty()) throw UsageError("generate needs --out");
    std::string map_name = a.map;
    PopulationSpec pop;
    double duration = a.duration_s;
    double slot = a.slot_s;
    std::uint64_t seed = a.seed;
    std::size_t elevators = a.elevators;
    double stop = a.elevator_stop_s;
    double speed = 1.0;
    pop.fixed = a.fixed;
    pop.vehicles = a.vehicles;
    pop.pedestrians = a.pedestrians;
    if (a.scenario) {
      const Scenario s = load_scenario(*a.scenario);
      s.validate();
      map_name = s.map;
      pop.fixed = s.kind(NodeKind::Fixed).population;
      pop.vehicles = s.kind(NodeKind::Vehicular).population;
      pop.pedestrians = s.kind(NodeKind::Pedestrian).population;
      pop.pedestrian = s.pedestrian;
      pop.vehicle = s.vehicle;
      elevators = s.kind(NodeKind::Elevator).population;
      stop = s.elevator_stop_s;
      speed = s.elevator_speed_floors_per_s;
      duration = s.end_s;
      slot = s.slot_len_s;
      seed = s.seed;
    }
    if (!(slot > 0.0)) throw ConfigError("slot must be positive");
    if (!(duration >= 0.0) || !std::isfinite(duration)) throw ConfigError("duration must be finite and non-negative");
    UrbanMap map = map_name == "reference" ? reference_map() : load_map(map_name);
    validate(map);
    pop.elevators = place_elevators(map, elevators, stop, speed);
    auto src = generate_population(map, pop, duration, slot, seed);
    const std::size_t n = write_traces(*src, a.out);
    out << "records " << n << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario s = scenario_for(a.scenario, a.overrides, a.seed);
    const RunMetrics m = run(s);
    std::filesystem::create_directories(a.out_dir);
    {
      std::ostringstream ts, fx, tx;
      write_coverage_timeseries(ts, m);
      write_fx(fx, m);
      write_transmissions(tx, m);
      write_file(a.out_dir / "coverage_timeseries.csv", ts.str());
      write_file(a.out_dir / "fx.csv", fx.str());
      write_file(a.out_dir / "transmissions.csv", tx.str());
    }
    const std::string summary = summary_text(m);
    write_file(a.out_dir / "summary.csv", summary);
    out << "digest " << digest_hex(m.digest) << " seed " << m.seed << '\n' << summary;
    return static_cast<int>(kOk);
  });
}

namespace {

struct SweepRow {
  std::size_t value_index;
  std::uint64_t seed;
  std::string line;
  bool ok;
};

std::vector<std::size_t> axis_order(const std::vector<std::string>& values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<std::optional<double>> num;
  bool numeric = true;
  for (const auto& v : values) {
    num.push_back(text::parse_double(v));
    numeric = numeric && num.back().has_value();
  }
  if (numeric) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return *num[x] < *num[y]; });
  } else {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  }
  return order;
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string sweep_header() {
  std::string h = "axis,value,seed,digest,status";
  for (NodeKind k : kAllKinds) {
    const std::string p(1, kind_letter(k));
    h += "," + p + "_nodes," + p + "_mean_coverage," + p + "_half_width," + p + "_transmissions," + p +
         "_context_transmissions";
  }
  return h;
}

SweepRow sweep_point(const SweepSpec& spec, std::size_t vi, std::uint64_t seed) {
  const std::string& value = spec.values[vi];
  const std::string prefix = spec.axis + "," + csv_safe(value) + "," + std::to_string(seed) + ",";
  try {
    Scenario s = spec.base;
    if (spec.axis == "preset") {
      apply_preset(s, value);
    } else {
      apply_setting(s, spec.axis, value);
    }
    s.seed = seed;
    const RunMetrics m = run(s);
    std::string line = prefix + digest_hex(m.digest) + ",ok";
    for (NodeKind k : kAllKinds) {
      const std::size_t i = kind_index(k);
      std::string mean = "nan", hw = "nan";
      if (m.population[i] > 0) {
        try {
          const MeanCi ci = mean_coverage(m, k);
          mean = format6(ci.mean);
          hw = format6(ci.half_width);
        } catch (const Error&) {
        }
      }
      line += "," + std::to_string(m.population[i]) + "," + mean + "," + hw + "," + std::to_string(m.transmissions[i]) +
              "," + std::to_string(m.context_transmissions[i]);
    }
    return {vi, seed, line, true};
  } catch (const std::exception& e) {
    std::string line = prefix + "," + csv_safe(std::string("error: ") + e.what());
    for (int i = 0; i < 4; ++i) line += ",,,,,";
    return {vi, seed, line, false};
  }
}

}  // namespace

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    SweepSpec spec;
    try {
      spec = load_sweep(a.sweep);
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
    const auto order = axis_order(spec.values);
    std::vector<std::pair<std::size_t, std::uint64_t>> points;
    for (std::size_t vi : order) {
      for (std::uint64_t seed : spec.seeds) points.emplace_back(vi, seed);
    }
    std::vector<SweepRow> rows(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < points.size(); i = next++) rows[i] = sweep_point(spec, points[i].first, points[i].second);
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(a.jobs, static_cast<unsigned>(points.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::string csv = sweep_header() + "\n";
    std::size_t failed = 0;
    for (const auto& r : rows) {
      csv += r.line + "\n";
      if (!r.ok) ++failed;
    }
    std::filesystem::create_directories(a.out_dir);
    write_file(a.out_dir / "sweep_summary.csv", csv);
    out << csv;
    if (failed > 0) {
      err << failed << " of " << rows.size() << " sweep points failed\n";
      return static_cast<int>(kRuntime);
    }
    return static_cast<int>(kOk);
  });
}

int cmd_collision(const CollisionArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const CollisionResult r = collision_prob({a.bits, a.rate_bps, a.period_s, a.transmitters}, a.refined);
    out << "H " << format6(a.bits / a.rate_bps) << '\n'
        << "p_c " << format6(r.p_collision) << '\n'
        << "p_ok " << format6(r.p_ok) << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_replay_check(const ReplayArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario s = scenario_for(a.scenario, a.overrides, a.seed);
    const std::string digest = digest_hex(scenario_digest(s));
    if (a.against) {
      std::ifstream f(*a.against);
      if (!f) throw Error("cannot open " + a.against->string());
      std::stringstream buf;
      buf << f.rdbuf();
      const std::string previous = buf.str();
      const auto first_nl = previous.find('\n');
      const std::string row = first_nl == std::string::npos ? "" : previous.substr(first_nl + 1);
      const std::string recorded = row.substr(0, row.find(','));
      if (recorded != digest) throw Error("scenario digest mismatch: summary has " + recorded + ", scenario is " + digest);
      const bool same = summary_text(run(s)) == previous;
      out << "digest " << digest << (same ? " identical" : " differs") << '\n';
      return static_cast<int>(same ? kOk : kRuntime);
    }
    const bool same = replay_check(s, s.seed);
    out << "digest " << digest << " seed " << s.seed << (same ? " identical" : " differs") << '\n';
    return static_cast<int>(same ? kOk : kRuntime);
  });
}

}  // namespace odsim::cli
