#include "odsim/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "odsim/error.hpp"
#include "odsim/text.hpp"

namespace odsim {

Scenario::Scenario() {
  const auto init = [this](NodeKind k, std::size_t population, double roi_side, double threshold) {
    KindConfig& c = kind(k);
    c.population = population;
    c.params.roi_side_m = roi_side;
    c.threshold_db = threshold;
  };
  init(NodeKind::Fixed, 54, 400.0, -30.0);
  init(NodeKind::Vehicular, 50, 200.0, -30.0);
  init(NodeKind::Pedestrian, 200, 100.0, -30.0);
  init(NodeKind::Elevator, 0, 400.0, -45.0);
}

std::size_t Scenario::total_population() const {
  std::size_t n = 0;
  for (const auto& k : kinds) n += k.population;
  return n;
}

ContactThresholds Scenario::thresholds() const {
  ContactThresholds t;
  for (NodeKind k : kAllKinds) t.set(k, kind(k).threshold_db);
  return t;
}

InfoDynamics Scenario::info_dynamics() const {
  return std::isinf(info_update_s) ? InfoDynamics::static_info() : InfoDynamics::every(info_update_s);
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void require_slots(double seconds, double slot, const char* what, bool allow_inf = false) {
  if (allow_inf && std::isinf(seconds) && seconds > 0) return;
  require(seconds > 0.0 && std::isfinite(seconds), std::string(what) + " must be positive");
  to_slots(seconds, slot, what);
}

}  // namespace

void Scenario::validate() const {
  require(slot_len_s > 0.0 && std::isfinite(slot_len_s), "slot must be positive");
  require(tile_side_m > 0.0 && std::isfinite(tile_side_m), "tile_side must be positive");
  require(start_s >= 0.0 && std::isfinite(start_s), "start must be non-negative");
  require(std::isfinite(end_s), "end must be finite");
  require(transient_s >= 0.0, "transient must be non-negative");
  require(end_s > start_s + transient_s, "end must exceed start + transient");
  if (start_s > 0.0) to_slots(start_s, slot_len_s, "start");
  to_slots(end_s, slot_len_s, "end");
  require_slots(sample_period_s, slot_len_s, "sample_period");
  require_slots(info_update_s, slot_len_s, "info_update", true);
  require(!map.empty(), "map must be 'reference' or a map file path");
  loss.validate();
  thresholds().validate();
  require(loss_source == LossSource::Model || !loss_file.empty(), "loss_source file/override needs loss_file");

  require(roi.count >= 1, "roi.count must be at least 1");
  require(roi.centers.empty() || roi.centers.size() == roi.count, "roi.centers must list roi.count centres");
  require_slots(roi.sync_period_s, slot_len_s, "roi.sync_period");
  require_slots(roi.relink_period_s, slot_len_s, "roi.relink_period");
  require_slots(roi.async_min_s, slot_len_s, "roi.async_min");
  require_slots(roi.async_max_s, slot_len_s, "roi.async_max");
  require(roi.async_min_s <= roi.async_max_s, "roi.async_min must not exceed roi.async_max");

  const auto& p = pedestrian;
  require(p.speed.min_kmh > 0.0 && p.speed.min_kmh <= p.speed.max_kmh, "pedestrian speed range is invalid");
  require(p.indoor_fraction >= 0.0 && p.indoor_fraction <= 1.0, "pedestrian.indoor_fraction must lie in [0,1]");
  require(p.dwell_min_s > 0.0 && p.dwell_min_s <= p.dwell_max_s, "pedestrian dwell range is invalid");
  require(p.exit_probability > 0.0 && p.exit_probability <= 1.0, "pedestrian.exit_probability must lie in (0,1]");
  require(p.stair_speed_mps > 0.0, "pedestrian.stair_speed must be positive");
  const auto& v = vehicle;
  require(v.speed.min_kmh > 0.0 && v.speed.min_kmh <= v.speed.max_kmh, "vehicle speed range is invalid");
  require(v.stop_probability >= 0.0 && v.stop_probability <= 1.0, "vehicle.stop_probability must lie in [0,1]");
  require(v.stop_max_s >= 0.0, "vehicle.stop_max must be non-negative");
  require(elevator_stop_s > 0.0, "elevator.stop must be positive");
  require(elevator_speed_floors_per_s > 0.0, "elevator.speed must be positive");

  for (NodeKind k : kAllKinds) {
    const auto& kc = kind(k);
    const std::string name(1, kind_letter(k));
    const std::size_t min_cap = buffer_capacity_for(kc.params.roi_side_m, tile_side_m);
    require(kc.params.capacity == 0 || kc.params.capacity >= min_cap, name + ".capacity below the ROI tile count");
    require(kc.params.k >= 1, name + ".k must be at least 1");
    const auto& s = kc.params.policy.schedule;
    require_slots(s.period_s, slot_len_s, (name + ".period").c_str(), true);
    if (s.context != ContextPolicy::None) require_slots(s.wake_s, slot_len_s, (name + ".context window").c_str());
  }
}

namespace {

struct Setting {
  std::string key;
  std::function<std::string(const Scenario&)> get;
  std::function<void(Scenario&, std::string_view)> set;
};

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) + " (expected " + expected +
                    ")");
}

double as_double(std::string_view key, std::string_view v) {
  const auto d = text::parse_double(v);
  if (!d || std::isnan(*d)) bad_value(key, v, "a number");
  return *d;
}

std::size_t as_size(std::string_view key, std::string_view v) {
  const auto n = text::parse_int<std::size_t>(v);
  if (!n) bad_value(key, v, "a non-negative integer");
  return *n;
}

bool as_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  bad_value(key, v, "true or false");
}

std::string fmt(double v) { return text::format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

std::string context_text(const TransmitSchedule& s) {
  switch (s.context) {
    case ContextPolicy::None: return "none";
    case ContextPolicy::Floor: return "floor(" + fmt(s.wake_s) + ")";
    case ContextPolicy::Walk: return "walk(" + fmt(s.wake_s) + ")";
  }
  return "none";
}

void parse_context(std::string_view key, std::string_view v, TransmitSchedule& s) {
  if (v == "none") {
    s.context = ContextPolicy::None;
    s.wake_s = 0.0;
    return;
  }
  const auto open = v.find('(');
  if (open == std::string_view::npos || v.back() != ')') bad_value(key, v, "none, floor(w) or walk(w)");
  const auto name = text::trim(v.substr(0, open));
  const auto arg = text::parse_double(text::trim(v.substr(open + 1, v.size() - open - 2)));
  if (!arg || !(*arg > 0.0) || std::isinf(*arg)) bad_value(key, v, "a positive finite window");
  if (name == "floor") {
    s.context = ContextPolicy::Floor;
  } else if (name == "walk") {
    s.context = ContextPolicy::Walk;
  } else {
    bad_value(key, v, "none, floor(w) or walk(w)");
  }
  s.wake_s = *arg;
}

std::string centers_text(const std::vector<Point2>& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ' ';
    out += fmt(c[i].x) + ":" + fmt(c[i].y);
  }
  return out;
}

std::vector<Point2> parse_centers(std::string_view key, std::string_view v) {
  std::vector<Point2> out;
  for (auto tok : text::split(v, " \t,;")) {
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos) bad_value(key, v, "space-separated x:y pairs");
    const auto x = text::parse_double(tok.substr(0, colon));
    const auto y = text::parse_double(tok.substr(colon + 1));
    if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y)) bad_value(key, v, "space-separated x:y pairs");
    out.push_back({*x, *y});
  }
  return out;
}

std::string loss_source_text(LossSource s) {
  switch (s) {
    case LossSource::Model: return "model";
    case LossSource::File: return "file";
    case LossSource::Override: return "override";
  }
  return "model";
}

#define ODSIM_DOUBLE(k, field) \
  Setting{k, [](const Scenario& s) { return fmt(s.field); }, [](Scenario& s, std::string_view v) { s.field = as_double(k, v); }}
#define ODSIM_SIZE(k, field) \
  Setting{k, [](const Scenario& s) { return fmt(s.field); }, [](Scenario& s, std::string_view v) { s.field = as_size(k, v); }}
#define ODSIM_BOOL(k, field) \
  Setting{k, [](const Scenario& s) { return fmt(s.field); }, [](Scenario& s, std::string_view v) { s.field = as_bool(k, v); }}
#define ODSIM_STRING(k, field) \
  Setting{k, [](const Scenario& s) { return s.field; }, [](Scenario& s, std::string_view v) { s.field = std::string(v); }}

std::vector<Setting> build_settings() {
  std::vector<Setting> r = {
      ODSIM_STRING("map", map),
      ODSIM_DOUBLE("tile_side", tile_side_m),
      ODSIM_DOUBLE("slot", slot_len_s),
      ODSIM_DOUBLE("start", start_s),
      ODSIM_DOUBLE("end", end_s),
      ODSIM_DOUBLE("transient", transient_s),
      ODSIM_DOUBLE("sample_period", sample_period_s),
      Setting{"seed", [](const Scenario& s) { return std::to_string(s.seed); },
              [](Scenario& s, std::string_view v) {
                const auto n = text::parse_int<std::uint64_t>(v);
                if (!n) bad_value("seed", v, "a non-negative integer");
                s.seed = *n;
              }},
      ODSIM_DOUBLE("info_update", info_update_s),
      ODSIM_STRING("trace", trace),
      Setting{"ci_pooling", [](const Scenario& s) { return std::string(s.ci_pooling == CiPooling::PerNode ? "node" : "sample"); },
              [](Scenario& s, std::string_view v) {
                if (v == "sample") {
                  s.ci_pooling = CiPooling::PerSample;
                } else if (v == "node") {
                  s.ci_pooling = CiPooling::PerNode;
                } else {
                  bad_value("ci_pooling", v, "sample or node");
                }
              }},
      Setting{"loss_source", [](const Scenario& s) { return loss_source_text(s.loss_source); },
              [](Scenario& s, std::string_view v) {
                if (v == "model") {
                  s.loss_source = LossSource::Model;
                } else if (v == "file") {
                  s.loss_source = LossSource::File;
                } else if (v == "override") {
                  s.loss_source = LossSource::Override;
                } else {
                  bad_value("loss_source", v, "model, file or override");
                }
              }},
      ODSIM_STRING("loss_file", loss_file),
      ODSIM_DOUBLE("loss.reference_db", loss.reference_loss_db),
      ODSIM_DOUBLE("loss.exponent", loss.path_loss_exponent),
      ODSIM_DOUBLE("loss.wall_db", loss.wall_penalty_db),
      ODSIM_DOUBLE("loss.floor_db", loss.floor_penalty_db),
      ODSIM_SIZE("roi.count", roi.count),
      Setting{"roi.centers", [](const Scenario& s) { return centers_text(s.roi.centers); },
              [](Scenario& s, std::string_view v) { s.roi.centers = parse_centers("roi.centers", v); }},
      ODSIM_DOUBLE("roi.sync_period", roi.sync_period_s),
      ODSIM_BOOL("roi.redraw", roi.redraw),
      ODSIM_DOUBLE("roi.async_min", roi.async_min_s),
      ODSIM_DOUBLE("roi.async_max", roi.async_max_s),
      ODSIM_DOUBLE("roi.relink_period", roi.relink_period_s),
      ODSIM_DOUBLE("pedestrian.speed_min", pedestrian.speed.min_kmh),
      ODSIM_DOUBLE("pedestrian.speed_max", pedestrian.speed.max_kmh),
      ODSIM_DOUBLE("pedestrian.indoor_fraction", pedestrian.indoor_fraction),
      ODSIM_DOUBLE("pedestrian.dwell_min", pedestrian.dwell_min_s),
      ODSIM_DOUBLE("pedestrian.dwell_max", pedestrian.dwell_max_s),
      ODSIM_DOUBLE("pedestrian.exit_probability", pedestrian.exit_probability),
      ODSIM_DOUBLE("pedestrian.stair_speed", pedestrian.stair_speed_mps),
      ODSIM_DOUBLE("vehicle.speed_min", vehicle.speed.min_kmh),
      ODSIM_DOUBLE("vehicle.speed_max", vehicle.speed.max_kmh),
      ODSIM_DOUBLE("vehicle.stop_probability", vehicle.stop_probability),
      ODSIM_DOUBLE("vehicle.stop_max", vehicle.stop_max_s),
      ODSIM_DOUBLE("elevator.stop", elevator_stop_s),
      ODSIM_DOUBLE("elevator.speed", elevator_speed_floors_per_s),
  };
  for (NodeKind k : kAllKinds) {
    const std::string p = std::string(1, kind_letter(k)) + ".";
    auto kc = [k](Scenario& s) -> KindConfig& { return s.kind(k); };
    auto kcc = [k](const Scenario& s) -> const KindConfig& { return s.kind(k); };
    auto add = [&](const std::string& name, std::function<std::string(const KindConfig&)> get,
                   std::function<void(KindConfig&, const std::string&, std::string_view)> set) {
      const std::string key = p + name;
      r.push_back({key, [kcc, get](const Scenario& s) { return get(kcc(s)); },
                   [kc, set, key](Scenario& s, std::string_view v) { set(kc(s), key, v); }});
    };
    add("population", [](const KindConfig& c) { return fmt(c.population); },
        [](KindConfig& c, const std::string& key, std::string_view v) { c.population = as_size(key, v); });
    add("roi_side", [](const KindConfig& c) { return fmt(c.params.roi_side_m); },
        [](KindConfig& c, const std::string& key, std::string_view v) { c.params.roi_side_m = as_double(key, v); });
    add("capacity", [](const KindConfig& c) { return fmt(c.params.capacity); },
        [](KindConfig& c, const std::string& key, std::string_view v) { c.params.capacity = as_size(key, v); });
    add("k", [](const KindConfig& c) { return fmt(c.params.k); },
        [](KindConfig& c, const std::string& key, std::string_view v) { c.params.k = as_size(key, v); });
    add("threshold", [](const KindConfig& c) { return fmt(c.threshold_db); },
        [](KindConfig& c, const std::string& key, std::string_view v) { c.threshold_db = as_double(key, v); });
    add("roi", [](const KindConfig& c) { return to_string(c.params.roi); },
        [](KindConfig& c, const std::string& key, std::string_view v) {
          const auto m = roi_model_from_string(v);
          if (!m) bad_value(key, v, "linked, floating, static_sync or static_async");
          c.params.roi = *m;
        });
    add("insertion", [](const KindConfig& c) { return std::string(c.params.policy.insertion == Insertion::Selective ? "si" : "fifo"); },
        [](KindConfig& c, const std::string& key, std::string_view v) {
          if (v == "si") {
            c.params.policy.insertion = Insertion::Selective;
          } else if (v == "fifo") {
            c.params.policy.insertion = Insertion::Fifo;
          } else {
            bad_value(key, v, "si or fifo");
          }
        });
    add("eviction", [](const KindConfig& c) { return std::string(c.params.policy.eviction == Eviction::Selective ? "sd" : "fifo"); },
        [](KindConfig& c, const std::string& key, std::string_view v) {
          if (v == "sd") {
            c.params.policy.eviction = Eviction::Selective;
          } else if (v == "fifo") {
            c.params.policy.eviction = Eviction::Fifo;
          } else {
            bad_value(key, v, "sd or fifo");
          }
        });
    add("sensing_si", [](const KindConfig& c) { return fmt(c.params.policy.sensing_si); },
        [](KindConfig& c, const std::string& key, std::string_view v) { c.params.policy.sensing_si = as_bool(key, v); });
    if (k == NodeKind::Pedestrian) {
      add("period", [](const KindConfig& c) { return fmt(c.params.policy.schedule.period_s); },
          [](KindConfig& c, const std::string& key, std::string_view v) {
            c.params.policy.schedule.period_s = as_double(key, v);
          });
      add("context", [](const KindConfig& c) { return context_text(c.params.policy.schedule); },
          [](KindConfig& c, const std::string& key, std::string_view v) { parse_context(key, v, c.params.policy.schedule); });
    }
  }
  return r;
}

#undef ODSIM_DOUBLE
#undef ODSIM_SIZE
#undef ODSIM_BOOL
#undef ODSIM_STRING

const std::vector<Setting>& settings() {
  static const std::vector<Setting> s = build_settings();
  return s;
}

}  // namespace

void apply_setting(Scenario& s, std::string_view key, std::string_view value) {
  for (const auto& st : settings()) {
    if (st.key == key) {
      st.set(s, text::trim(value));
      return;
    }
  }
  throw ConfigError("unknown key: " + std::string(key));
}

std::vector<std::string> setting_keys() {
  std::vector<std::string> out;
  for (const auto& st : settings()) out.push_back(st.key);
  return out;
}

std::string canonical_text(const Scenario& s, bool include_seed) {
  std::string out;
  for (const auto& st : settings()) {
    if (!include_seed && st.key == "seed") continue;
    out += st.key + " = " + st.get(s) + "\n";
  }
  return out;
}

std::uint64_t scenario_digest(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text(s, false)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest_hex(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

}  // namespace odsim
