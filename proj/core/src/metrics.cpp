#include "odsim/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "odsim/error.hpp"

namespace odsim {

std::string format6(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

namespace {

double half_width(double sd, std::size_t n) { return n > 1 ? kZ95 * sd / std::sqrt(static_cast<double>(n)) : 0.0; }

double sample_sd(std::span<const double> xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double mean_of(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

MeanCi mean_coverage(std::span<const CoverageSample> samples, NodeKind kind, double from_t, CiPooling pooling) {
  std::vector<double> values;
  std::map<NodeId, std::vector<double>> by_node;
  for (const auto& s : samples) {
    if (s.kind != kind || s.t < from_t) continue;
    values.push_back(s.c);
    by_node[s.node].push_back(s.c);
  }
  if (values.empty()) {
    throw Error(std::string("no post-transient coverage samples for kind ") + kind_letter(kind));
  }
  MeanCi r;
  r.mean = mean_of(values);
  if (pooling == CiPooling::PerSample) {
    r.n = values.size();
    r.half_width = half_width(sample_sd(values, r.mean), r.n);
  } else {
    std::vector<double> node_means;
    for (const auto& [id, v] : by_node) node_means.push_back(mean_of(v));
    r.n = node_means.size();
    r.half_width = half_width(sample_sd(node_means, mean_of(node_means)), r.n);
  }
  return r;
}

MeanCi mean_coverage(const RunMetrics& m, NodeKind kind) {
  return mean_coverage(m.samples, kind, m.start_s + m.transient_s, m.pooling);
}

double fraction_above(std::span<const CoverageSample> samples, NodeKind kind, double alpha, double t) {
  std::size_t n = 0;
  std::size_t above = 0;
  for (const auto& s : samples) {
    if (s.kind != kind || s.t != t) continue;
    ++n;
    if (s.c >= alpha) ++above;
  }
  if (n == 0) throw Error(std::string("no active node of kind ") + kind_letter(kind) + " sampled at t=" + format6(t));
  return static_cast<double>(above) / static_cast<double>(n);
}

std::vector<FxRow> fx_table(std::span<const CoverageSample> samples, std::span<const double> alphas) {
  // (t, kind) -> coverage values, in time order.
  std::map<std::pair<double, std::size_t>, std::vector<double>> groups;
  for (const auto& s : samples) groups[{s.t, kind_index(s.kind)}].push_back(s.c);
  std::vector<FxRow> out;
  for (const auto& [key, values] : groups) {
    for (double a : alphas) {
      std::size_t above = 0;
      for (double c : values) above += c >= a ? 1 : 0;
      out.push_back({key.first, kAllKinds[key.second], a, static_cast<double>(above) / static_cast<double>(values.size())});
    }
  }
  return out;
}

TransmissionReport transmission_report(const RunMetrics& m) {
  TransmissionReport r;
  for (std::size_t i = 0; i < 4; ++i) {
    r.total[i] = m.transmissions[i];
    r.context[i] = m.context_transmissions[i];
    r.periodic[i] = m.transmissions[i] - m.context_transmissions[i];
  }
  return r;
}

void CoverageAccumulator::Welford::add(double x) {
  ++n;
  const double d = x - mean;
  mean += d / static_cast<double>(n);
  m2 += d * (x - mean);
}

void CoverageAccumulator::Welford::merge(const Welford& o) {
  if (o.n == 0) return;
  if (n == 0) {
    *this = o;
    return;
  }
  const double total = static_cast<double>(n + o.n);
  const double d = o.mean - mean;
  mean += d * static_cast<double>(o.n) / total;
  m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
  n += o.n;
}

void CoverageAccumulator::add(const CoverageSample& s) {
  if (s.t < from_t_) return;
  all_[kind_index(s.kind)].add(s.c);
  per_node_[kind_index(s.kind)][s.node].add(s.c);
}

void CoverageAccumulator::merge(const CoverageAccumulator& other) {
  for (std::size_t i = 0; i < 4; ++i) {
    all_[i].merge(other.all_[i]);
    for (const auto& [id, w] : other.per_node_[i]) per_node_[i][id].merge(w);
  }
}

MeanCi CoverageAccumulator::result(NodeKind kind) const {
  const Welford& w = all_[kind_index(kind)];
  if (w.n == 0) throw Error(std::string("no post-transient coverage samples for kind ") + kind_letter(kind));
  MeanCi r;
  r.mean = w.mean;
  if (pooling_ == CiPooling::PerSample) {
    r.n = w.n;
    r.half_width = half_width(w.n > 1 ? std::sqrt(w.m2 / static_cast<double>(w.n - 1)) : 0.0, w.n);
  } else {
    Welford across;
    for (const auto& [id, nw] : per_node_[kind_index(kind)]) across.add(nw.mean);
    r.n = across.n;
    r.half_width = half_width(across.n > 1 ? std::sqrt(across.m2 / static_cast<double>(across.n - 1)) : 0.0, across.n);
  }
  return r;
}

void write_coverage_timeseries(std::ostream& out, const RunMetrics& m) {
  std::map<std::pair<double, std::size_t>, std::pair<std::size_t, double>> groups;
  for (const auto& s : m.samples) {
    auto& g = groups[{s.t, kind_index(s.kind)}];
    ++g.first;
    g.second += s.c;
  }
  out << "t,kind,nodes,mean_coverage\n";
  for (const auto& [key, g] : groups) {
    out << format6(key.first) << ',' << kind_letter(kAllKinds[key.second]) << ',' << g.first << ','
        << format6(g.second / static_cast<double>(g.first)) << '\n';
  }
}

void write_fx(std::ostream& out, const RunMetrics& m, std::span<const double> alphas) {
  out << "t,kind,alpha,fraction\n";
  for (const auto& r : fx_table(m.samples, alphas)) {
    out << format6(r.t) << ',' << kind_letter(r.kind) << ',' << format6(r.alpha) << ',' << format6(r.fraction) << '\n';
  }
}

void write_summary_header(std::ostream& out) {
  out << "digest,seed,kind,nodes,mean_coverage,half_width,transmissions,context_transmissions\n";
}

void write_summary_rows(std::ostream& out, const RunMetrics& m) {
  for (NodeKind k : kAllKinds) {
    const std::size_t i = kind_index(k);
    if (m.population[i] == 0) continue;
    double mean = std::nan("");
    double hw = std::nan("");
    bool any = false;
    for (const auto& s : m.samples) {
      if (s.kind == k && s.t >= m.start_s + m.transient_s) {
        any = true;
        break;
      }
    }
    if (any) {
      const MeanCi ci = mean_coverage(m, k);
      mean = ci.mean;
      hw = ci.half_width;
    }
    out << digest_hex(m.digest) << ',' << m.seed << ',' << kind_letter(k) << ',' << m.population[i] << ','
        << format6(mean) << ',' << format6(hw) << ',' << m.transmissions[i] << ',' << m.context_transmissions[i]
        << '\n';
  }
}

void write_transmissions(std::ostream& out, const RunMetrics& m) {
  const TransmissionReport r = transmission_report(m);
  out << "kind,total,periodic,context\n";
  for (NodeKind k : kAllKinds) {
    const std::size_t i = kind_index(k);
    if (m.population[i] == 0) continue;
    out << kind_letter(k) << ',' << r.total[i] << ',' << r.periodic[i] << ',' << r.context[i] << '\n';
  }
}

}  // namespace odsim
