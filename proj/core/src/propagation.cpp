#include "odsim/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "odsim/error.hpp"

namespace odsim {

void LossModel::validate() const {
  if (!(path_loss_exponent > 0.0)) throw ModelError("path loss exponent must be positive");
  if (!(wall_penalty_db >= 0.0) || !(floor_penalty_db >= 0.0)) throw ModelError("loss penalties must be non-negative");
  if (!std::isfinite(reference_loss_db)) throw ModelError("reference loss must be finite");
}

void ContactThresholds::validate() const {
  for (NodeKind k : kAllKinds) {
    const double a = of(k);
    if (!(a <= 0.0) || !std::isfinite(a)) {
      throw ModelError(std::string("contact threshold for ") + kind_letter(k) + " must be finite and <= 0 dB");
    }
  }
}

int walls_crossed(Point2 a, Point2 b, const UrbanMap& map) {
  const double lx = std::min(a.x, b.x), hx = std::max(a.x, b.x);
  const double ly = std::min(a.y, b.y), hy = std::max(a.y, b.y);
  int walls = 0;
  for (const Building& bld : map.buildings) {
    const Rect& r = bld.footprint;
    if (hx < r.x0 || lx > r.x1 || hy < r.y0 || ly > r.y1) continue;
    const bool in_a = r.contains_closed(a);
    const bool in_b = r.contains_closed(b);
    if (in_a != in_b) {
      walls += 1;
    } else if (!in_a && segment_crosses_interior(a, b, r)) {
      walls += 2;
    }
  }
  return walls;
}

double channel_loss(const TraceRecord& a, const TraceRecord& b, const UrbanMap& map, const LossModel& model) {
  const double d = std::max(distance(a.pos, b.pos), 1.0);
  const double path = model.reference_loss_db + 10.0 * model.path_loss_exponent * std::log10(d);
  const int walls = walls_crossed(a.pos.ground(), b.pos.ground(), map);
  const int floors = std::abs(a.floor.level() - b.floor.level());
  return -path - model.wall_penalty_db * walls - model.floor_penalty_db * floors;
}

double max_range_m(double alpha_db, const LossModel& model) {
  const double r = std::pow(10.0, (-alpha_db - model.reference_loss_db) / (10.0 * model.path_loss_exponent));
  return std::max(r, 1.0);
}

std::vector<std::pair<std::size_t, std::size_t>> ContactSet::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < receivers.size(); ++i) {
    for (std::size_t j : receivers[i]) out.emplace_back(std::min(i, j), std::max(i, j));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<double> LossContext::loss(const TraceRecord& a, const TraceRecord& b) const {
  if (source != LossSource::Model && table != nullptr) {
    if (auto v = table->lookup(a.slot, a.node, b.node)) return v;
  }
  if (source == LossSource::File) return std::nullopt;
  return channel_loss(a, b, *map, model);
}

namespace {

void check_records(std::span<const TraceRecord> records) {
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].slot != records[0].slot) throw TraceError("contacts requested across different slots");
    if (records[i].node <= records[i - 1].node) {
      if (records[i].node == records[i - 1].node) {
        throw TraceError("node " + std::to_string(records[i].node) + " appears twice at slot " +
                         std::to_string(records[i].slot));
      }
      throw TraceError("records at slot " + std::to_string(records[i].slot) + " are not ordered by node id");
    }
  }
}

std::optional<std::size_t> index_of(std::span<const TraceRecord> records, NodeId id) {
  auto it = std::lower_bound(records.begin(), records.end(), id,
                             [](const TraceRecord& r, NodeId v) { return r.node < v; });
  if (it == records.end() || it->node != id) return std::nullopt;
  return static_cast<std::size_t>(it - records.begin());
}

}  // namespace

ContactSet contacts(std::span<const TraceRecord> records, const LossContext& ctx, const ContactThresholds& thresholds) {
  check_records(records);
  ContactSet out;
  out.receivers.resize(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double alpha = thresholds.of(records[i].kind);
    for (std::size_t j = 0; j < records.size(); ++j) {
      if (i == j) continue;
      const auto l = ctx.loss(records[i], records[j]);
      if (l && *l >= alpha) out.receivers[i].push_back(j);
    }
  }
  return out;
}

ContactIndex::ContactIndex(LossContext ctx, ContactThresholds thresholds)
    : ctx_(ctx), thresholds_(thresholds), cell_(1.0) {
  ctx_.model.validate();
  thresholds_.validate();
  if (ctx_.source != LossSource::Model && ctx_.table == nullptr) throw ConfigError("loss source needs a loss table");
  if (ctx_.source != LossSource::File && ctx_.map == nullptr) throw ConfigError("loss model needs a map");
  double smallest = HUGE_VAL;
  for (NodeKind k : kAllKinds) {
    range_[kind_index(k)] = max_range_m(thresholds_.of(k), ctx_.model);
    smallest = std::min(smallest, range_[kind_index(k)]);
  }
  if (ctx_.map != nullptr) {
    cell_ = std::max(smallest, 1.0);
    nx_ = std::max(1, static_cast<int>(std::ceil(ctx_.map->width_m / cell_)));
    ny_ = std::max(1, static_cast<int>(std::ceil(ctx_.map->height_m / cell_)));
    cells_.resize(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_));
  }
}

void ContactIndex::compute(std::span<const TraceRecord> records, std::span<const char> transmitting, ContactSet& out) {
  check_records(records);
  if (!transmitting.empty() && transmitting.size() != records.size()) {
    throw Error("transmit mask size does not match the record count");
  }
  out.receivers.resize(records.size());
  for (auto& r : out.receivers) r.clear();

  const bool geometric = ctx_.source != LossSource::File;
  if (geometric) {
    for (auto& c : cells_) c.clear();
    cell_of_.resize(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto cx = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(records[i].pos.x / cell_)), 0, nx_ - 1);
      const auto cy = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(records[i].pos.y / cell_)), 0, ny_ - 1);
      cell_of_[i] = {cx, cy};
      cells_[static_cast<std::size_t>(cy * nx_ + cx)].push_back(i);
    }
  }

  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!transmitting.empty() && !transmitting[i]) continue;
    const TraceRecord& a = records[i];
    candidates_.clear();
    if (geometric) {
      const double r = range_[kind_index(a.kind)];
      const auto reach = static_cast<std::int64_t>(std::ceil(r / cell_));
      const auto [cx, cy] = cell_of_[i];
      for (auto y = std::max<std::int64_t>(0, cy - reach); y <= std::min<std::int64_t>(ny_ - 1, cy + reach); ++y) {
        for (auto x = std::max<std::int64_t>(0, cx - reach); x <= std::min<std::int64_t>(nx_ - 1, cx + reach); ++x) {
          for (std::size_t j : cells_[static_cast<std::size_t>(y * nx_ + x)]) {
            if (j == i) continue;
            const double dx = records[j].pos.x - a.pos.x;
            const double dy = records[j].pos.y - a.pos.y;
            if (dx * dx + dy * dy <= r * r * (1.0 + 1e-12)) candidates_.push_back(j);
          }
        }
      }
    }
    if (ctx_.source != LossSource::Model) {
      for (const auto& e : ctx_.table->at(a.slot)) {
        if (e.a != a.node && e.b != a.node) continue;
        if (auto j = index_of(records, e.a == a.node ? e.b : e.a)) candidates_.push_back(*j);
      }
    }
    std::sort(candidates_.begin(), candidates_.end());
    candidates_.erase(std::unique(candidates_.begin(), candidates_.end()), candidates_.end());
    const double alpha = thresholds_.of(a.kind);
    for (std::size_t j : candidates_) {
      const auto l = ctx_.loss(a, records[j]);
      if (l && *l >= alpha) out.receivers[i].push_back(j);
    }
  }
}

}  // namespace odsim
