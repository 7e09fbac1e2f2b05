#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "odsim/engine.hpp"
#include "odsim/error.hpp"
#include "odsim/metrics.hpp"
#include "oracles.hpp"

using namespace odsim;
namespace ot = odsim::testing;

namespace {

std::vector<CoverageSample> random_samples(Rng& rng, std::size_t nodes, std::size_t times) {
  std::vector<CoverageSample> out;
  for (std::size_t t = 1; t <= times; ++t) {
    for (std::size_t n = 0; n < nodes; ++n) {
      const NodeKind k = n % 3 == 0 ? NodeKind::Vehicular : NodeKind::Pedestrian;
      out.push_back({10.0 * static_cast<double>(t), static_cast<NodeId>(n), k, uniform(rng, 0.0, 1.0)});
    }
  }
  return out;
}

/// Two-pass mean and half-width straight from the definitions.
MeanCi oracle_ci(const std::vector<CoverageSample>& all, NodeKind kind, double from_t, CiPooling pooling) {
  std::vector<double> xs;
  std::map<NodeId, std::pair<double, int>> per_node;
  for (const auto& s : all) {
    if (s.kind != kind || s.t < from_t) continue;
    xs.push_back(s.c);
    per_node[s.node].first += s.c;
    per_node[s.node].second += 1;
  }
  auto mean_sd = [](const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::pair{m, v.size() < 2 ? 0.0 : std::sqrt(ss / static_cast<double>(v.size() - 1))};
  };
  MeanCi r;
  r.n = xs.size();
  r.mean = mean_sd(xs).first;
  if (pooling == CiPooling::PerSample) {
    r.half_width = xs.size() < 2 ? 0.0 : 1.959963984540054 * mean_sd(xs).second / std::sqrt(static_cast<double>(xs.size()));
  } else {
    std::vector<double> means;
    for (const auto& [id, acc] : per_node) means.push_back(acc.first / acc.second);
    r.n = means.size();
    r.half_width =
        means.size() < 2 ? 0.0 : 1.959963984540054 * mean_sd(means).second / std::sqrt(static_cast<double>(means.size()));
  }
  return r;
}

RunMetrics stationary_run(std::size_t peds, double period_s, double end_s, std::uint64_t seed = 1) {
  Rng rng(seed);
  std::vector<TraceRecord> nodes;
  for (std::size_t i = 0; i < peds; ++i) {
    nodes.push_back({0, static_cast<NodeId>(i), NodeKind::Pedestrian,
                     {uniform(rng, 0.0, 500.0), uniform(rng, 0.0, 500.0), 0.0}, FloorState::walking()});
  }
  const auto slots = static_cast<std::int64_t>(std::llround(end_s / 0.2));
  Scenario s = ot::empty_scenario(end_s);
  s.seed = seed;
  s.sample_period_s = 60.0;
  auto& p = s.kind(NodeKind::Pedestrian);
  p.population = peds;
  p.params.policy.schedule.period_s = period_s;
  auto in = ot::inputs_for(ot::open_map(500, 500), 25.0, ot::stationary_trace(nodes, slots));
  return run(s, in);
}

}  // namespace

TEST(MeanCoverage, AllCoveredGivesOneWithZeroWidth) {
  std::vector<CoverageSample> s;
  for (int i = 0; i < 50; ++i) s.push_back({1.0 * i, static_cast<NodeId>(i % 5), NodeKind::Pedestrian, 1.0});
  for (auto pooling : {CiPooling::PerSample, CiPooling::PerNode}) {
    const MeanCi r = mean_coverage(s, NodeKind::Pedestrian, 0.0, pooling);
    EXPECT_DOUBLE_EQ(r.mean, 1.0);
    EXPECT_DOUBLE_EQ(r.half_width, 0.0);
    EXPECT_EQ(r.n, pooling == CiPooling::PerSample ? 50u : 5u);
  }
}

TEST(MeanCoverage, HalfOfTheNodesCovered) {
  std::vector<CoverageSample> s;
  for (NodeId n = 0; n < 10; ++n) s.push_back({5.0, n, NodeKind::Pedestrian, n % 2 == 0 ? 0.0 : 1.0});
  EXPECT_DOUBLE_EQ(mean_coverage(s, NodeKind::Pedestrian, 0.0, CiPooling::PerSample).mean, 0.5);
}

TEST(MeanCoverage, MatchesTheTwoPassOracle) {
  Rng rng(9);
  const auto s = random_samples(rng, 12, 40);
  for (auto pooling : {CiPooling::PerSample, CiPooling::PerNode}) {
    for (double from : {0.0, 105.0, 400.0}) {
      for (NodeKind k : {NodeKind::Pedestrian, NodeKind::Vehicular}) {
        const MeanCi want = oracle_ci(s, k, from, pooling);
        const MeanCi got = mean_coverage(s, k, from, pooling);
        EXPECT_EQ(got.n, want.n);
        EXPECT_NEAR(got.mean, want.mean, 1e-12);
        EXPECT_NEAR(got.half_width, want.half_width, 1e-12);
      }
    }
  }
}

TEST(MeanCoverage, SingleSampleHasZeroWidth) {
  const std::vector<CoverageSample> s{{1.0, 0, NodeKind::Pedestrian, 0.3}};
  EXPECT_DOUBLE_EQ(mean_coverage(s, NodeKind::Pedestrian, 0.0, CiPooling::PerSample).half_width, 0.0);
}

TEST(MeanCoverage, NoQualifyingSampleIsAnError) {
  const std::vector<CoverageSample> s{{1.0, 0, NodeKind::Pedestrian, 0.3}};
  EXPECT_THROW(mean_coverage(s, NodeKind::Vehicular, 0.0, CiPooling::PerSample), Error);
  EXPECT_THROW(mean_coverage(s, NodeKind::Pedestrian, 2.0, CiPooling::PerSample), Error);
  EXPECT_THROW(mean_coverage(std::vector<CoverageSample>{}, NodeKind::Pedestrian, 0.0, CiPooling::PerNode), Error);
}

TEST(MeanCoverage, RunOverloadSkipsTheTransient) {
  RunMetrics m;
  m.start_s = 100.0;
  m.transient_s = 50.0;
  m.samples = {{120.0, 0, NodeKind::Pedestrian, 0.0}, {150.0, 0, NodeKind::Pedestrian, 0.4},
               {160.0, 0, NodeKind::Pedestrian, 0.6}};
  const MeanCi r = mean_coverage(m, NodeKind::Pedestrian);
  EXPECT_EQ(r.n, 2u);
  EXPECT_DOUBLE_EQ(r.mean, 0.5);
}

TEST(Accumulator, StreamingEqualsBatch) {
  Rng rng(4);
  const auto s = random_samples(rng, 9, 30);
  for (auto pooling : {CiPooling::PerSample, CiPooling::PerNode}) {
    CoverageAccumulator whole(50.0, pooling), left(50.0, pooling), right(50.0, pooling);
    for (std::size_t i = 0; i < s.size(); ++i) {
      whole.add(s[i]);
      (i % 2 == 0 ? left : right).add(s[i]);
    }
    left.merge(right);
    for (NodeKind k : {NodeKind::Pedestrian, NodeKind::Vehicular}) {
      const MeanCi batch = mean_coverage(s, k, 50.0, pooling);
      for (const MeanCi& got : {whole.result(k), left.result(k)}) {
        EXPECT_EQ(got.n, batch.n);
        EXPECT_NEAR(got.mean, batch.mean, 1e-12);
        EXPECT_NEAR(got.half_width, batch.half_width, 1e-12);
      }
    }
  }
}

TEST(FractionAbove, Bounds) {
  Rng rng(2);
  const auto s = random_samples(rng, 20, 5);
  EXPECT_DOUBLE_EQ(fraction_above(s, NodeKind::Pedestrian, 0.0, 30.0), 1.0);
  double prev = 1.0;
  for (double a = 0.0; a <= 1.0; a += 0.05) {
    const double f = fraction_above(s, NodeKind::Pedestrian, a, 30.0);
    EXPECT_LE(f, prev);
    prev = f;
  }
  EXPECT_THROW(fraction_above(s, NodeKind::Pedestrian, 0.5, 31.0), Error);
  EXPECT_THROW(fraction_above(s, NodeKind::Elevator, 0.5, 30.0), Error);
}

TEST(FractionAbove, CountsInclusively) {
  const std::vector<CoverageSample> s{{1.0, 0, NodeKind::Pedestrian, 0.5},
                                      {1.0, 1, NodeKind::Pedestrian, 0.49},
                                      {1.0, 2, NodeKind::Pedestrian, 0.9},
                                      {1.0, 3, NodeKind::Pedestrian, 0.1}};
  EXPECT_DOUBLE_EQ(fraction_above(s, NodeKind::Pedestrian, 0.5, 1.0), 0.5);
}

TEST(FxTable, RowsAreBoundedAndMonotone) {
  Rng rng(8);
  const auto s = random_samples(rng, 15, 6);
  const std::vector<double> alphas{0.1, 0.3, 0.5, 0.7, 0.9};
  const auto rows = fx_table(s, alphas);
  EXPECT_EQ(rows.size(), 6u * 2u * alphas.size());
  std::map<std::pair<double, NodeKind>, double> last;
  for (const auto& r : rows) {
    EXPECT_GE(r.fraction, 0.0);
    EXPECT_LE(r.fraction, 1.0);
    EXPECT_DOUBLE_EQ(r.fraction, fraction_above(s, r.kind, r.alpha, r.t));
    auto [it, fresh] = last.try_emplace({r.t, r.kind}, r.fraction);
    if (!fresh) {
      EXPECT_LE(r.fraction, it->second);
      it->second = r.fraction;
    }
  }
}

TEST(Transmissions, ClosedFormForDivisiblePeriods) {
  for (double period : {0.2, 10.0, 60.0}) {
    const RunMetrics m = stationary_run(20, period, 600.0);
    const auto expected = static_cast<std::uint64_t>(20 * std::llround(600.0 / period));
    EXPECT_EQ(m.transmissions[kind_index(NodeKind::Pedestrian)], expected) << period;
    EXPECT_EQ(m.context_transmissions[kind_index(NodeKind::Pedestrian)], 0u);
  }
}

TEST(Transmissions, HalvingThePeriodDoublesTheCount) {
  const RunMetrics a = stationary_run(10, 20.0, 1200.0, 3);
  const RunMetrics b = stationary_run(10, 10.0, 1200.0, 3);
  EXPECT_EQ(2 * a.transmissions[kind_index(NodeKind::Pedestrian)], b.transmissions[kind_index(NodeKind::Pedestrian)]);
}

TEST(Transmissions, InfinitePeriodIsSilent) {
  const RunMetrics m = stationary_run(10, HUGE_VAL, 300.0);
  EXPECT_EQ(m.transmissions[kind_index(NodeKind::Pedestrian)], 0u);
  for (const auto& s : m.samples) EXPECT_LE(s.c, 1.0);
}

TEST(Transmissions, ReportSplitsPeriodicAndContext) {
  RunMetrics m;
  m.transmissions = {5, 6, 10, 0};
  m.context_transmissions = {0, 0, 4, 0};
  const auto r = transmission_report(m);
  EXPECT_EQ(r.total[kind_index(NodeKind::Pedestrian)], 10u);
  EXPECT_EQ(r.periodic[kind_index(NodeKind::Pedestrian)], 6u);
  EXPECT_EQ(r.context[kind_index(NodeKind::Pedestrian)], 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(r.periodic[i] + r.context[i], r.total[i]);
}

TEST(Csv, Headers) {
  RunMetrics m;
  m.population = {0, 0, 1, 0};
  m.samples = {{10.0, 0, NodeKind::Pedestrian, 0.25}};
  std::ostringstream ts, fx, sum, tx;
  write_coverage_timeseries(ts, m);
  write_fx(fx, m);
  write_summary_header(sum);
  write_summary_rows(sum, m);
  write_transmissions(tx, m);
  EXPECT_EQ(ts.str(), "t,kind,nodes,mean_coverage\n10,P,1,0.25\n");
  EXPECT_EQ(fx.str().substr(0, fx.str().find('\n')), "t,kind,alpha,fraction");
  EXPECT_NE(fx.str().find("10,P,0.3,0\n"), std::string::npos) << fx.str();
  EXPECT_EQ(sum.str().substr(0, sum.str().find('\n')),
            "digest,seed,kind,nodes,mean_coverage,half_width,transmissions,context_transmissions");
  EXPECT_EQ(tx.str(), "kind,total,periodic,context\nP,0,0,0\n");
}

TEST(Csv, SummaryWithoutPostTransientSamplesIsNan) {
  RunMetrics m;
  m.population = {0, 0, 1, 0};
  m.transient_s = 100.0;
  m.samples = {{10.0, 0, NodeKind::Pedestrian, 0.25}};
  std::ostringstream out;
  write_summary_rows(out, m);
  EXPECT_NE(out.str().find(",P,1,nan,"), std::string::npos) << out.str();
}

TEST(Format6, Examples) {
  EXPECT_EQ(format6(0.973), "0.973");
  EXPECT_EQ(format6(1.0 / 3.0), "0.333333");
  EXPECT_EQ(format6(123456789.0), "1.23457e+08");
  EXPECT_EQ(format6(std::nan("")), "nan");
  EXPECT_EQ(format6(HUGE_VAL), "inf");
  EXPECT_EQ(format6(-HUGE_VAL), "-inf");
}
