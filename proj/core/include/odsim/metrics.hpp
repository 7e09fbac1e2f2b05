#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "odsim/floor_state.hpp"
#include "odsim/scenario.hpp"
#include "odsim/trace.hpp"

namespace odsim {

struct CoverageSample {
  double t{0.0};
  NodeId node{0};
  NodeKind kind{NodeKind::Pedestrian};
  double c{0.0};

  friend bool operator==(const CoverageSample&, const CoverageSample&) = default;
};

struct RunMetrics {
  std::uint64_t digest{0};
  std::uint64_t seed{0};
  double start_s{0.0};
  double transient_s{0.0};
  double end_s{0.0};
  CiPooling pooling{CiPooling::PerSample};
  std::array<std::size_t, 4> population{};
  std::int64_t slots{0};
  std::uint64_t info_updates{0};
  std::array<std::uint64_t, 4> transmissions{};
  /// Transmissions fired only by an open wake window.
  std::array<std::uint64_t, 4> context_transmissions{};
  std::vector<CoverageSample> samples;
};

struct MeanCi {
  double mean{0.0};
  /// 95% normal-approximation half-width.
  double half_width{0.0};
  /// Samples pooled, or nodes under per-node pooling.
  std::size_t n{0};
};

inline constexpr double kZ95 = 1.959963984540054;

/// Mean coverage of `kind` over samples with t >= from_t. Throws Error when
/// no sample qualifies.
MeanCi mean_coverage(std::span<const CoverageSample> samples, NodeKind kind, double from_t, CiPooling pooling);
MeanCi mean_coverage(const RunMetrics& m, NodeKind kind);

/// Fraction of the kind's nodes sampled at t whose coverage is at least
/// alpha. Throws Error when no node of the kind was sampled at t.
double fraction_above(std::span<const CoverageSample> samples, NodeKind kind, double alpha, double t);

inline constexpr std::array<double, 4> kDefaultAlphas{0.3, 0.5, 0.7, 0.9};

struct FxRow {
  double t;
  NodeKind kind;
  double alpha;
  double fraction;
};

/// F_X(alpha, t) for every sample time, kind present at that time and alpha.
std::vector<FxRow> fx_table(std::span<const CoverageSample> samples, std::span<const double> alphas);

struct TransmissionReport {
  std::array<std::uint64_t, 4> total{};
  std::array<std::uint64_t, 4> periodic{};
  std::array<std::uint64_t, 4> context{};
};
TransmissionReport transmission_report(const RunMetrics& m);

/// Incremental version of mean_coverage, fed one sample at a time.
class CoverageAccumulator {
 public:
  CoverageAccumulator(double from_t, CiPooling pooling) : from_t_(from_t), pooling_(pooling) {}

  void add(const CoverageSample& s);
  /// Folds in another accumulator built with the same settings.
  void merge(const CoverageAccumulator& other);
  MeanCi result(NodeKind kind) const;

 private:
  struct Welford {
    std::size_t n{0};
    double mean{0.0};
    double m2{0.0};
    void add(double x);
    void merge(const Welford& o);
  };
  double from_t_;
  CiPooling pooling_;
  std::array<Welford, 4> all_{};
  std::array<std::unordered_map<NodeId, Welford>, 4> per_node_{};
};

/// CSV outputs. Numbers use 6 significant digits.
void write_coverage_timeseries(std::ostream& out, const RunMetrics& m);
void write_fx(std::ostream& out, const RunMetrics& m, std::span<const double> alphas = kDefaultAlphas);
void write_summary_header(std::ostream& out);
void write_summary_rows(std::ostream& out, const RunMetrics& m);
void write_transmissions(std::ostream& out, const RunMetrics& m);

std::string format6(double v);

}  // namespace odsim
