#include "odsim/trace.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "odsim/error.hpp"
#include "odsim/text.hpp"

namespace odsim {

VectorTraceSource::VectorTraceSource(TraceHeader header, std::vector<TraceRecord> records)
    : header_(header), records_(std::move(records)) {
  std::stable_sort(records_.begin(), records_.end(), [](const TraceRecord& a, const TraceRecord& b) {
    return a.slot != b.slot ? a.slot < b.slot : a.node < b.node;
  });
}

bool VectorTraceSource::next_slot(std::vector<TraceRecord>& out) {
  out.clear();
  if (pos_ >= records_.size()) return false;
  const std::int64_t slot = records_[pos_].slot;
  while (pos_ < records_.size() && records_[pos_].slot == slot) out.push_back(records_[pos_++]);
  return true;
}

TraceReader::TraceReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (!text::trim(line).empty()) break;
  }
  auto tok = text::split(line);
  if (tok.size() < 3 || tok[0] != "#" || tok[1] != "odsim-trace" || tok[2] != "1") {
    throw ParseError(source_, line_no_, "expected header '# odsim-trace 1 slot_len=... width=... height=...'");
  }
  bool have_slot = false;
  for (std::size_t i = 3; i < tok.size(); ++i) {
    const auto eq = tok[i].find('=');
    if (eq == std::string_view::npos) throw ParseError(source_, line_no_, "malformed header field");
    const auto key = tok[i].substr(0, eq);
    const auto value = text::parse_double(tok[i].substr(eq + 1));
    if (!value) throw ParseError(source_, line_no_, "malformed header value for " + std::string(key));
    if (key == "slot_len") {
      header_.slot_len = *value;
      have_slot = true;
    } else if (key == "width") {
      header_.width_m = *value;
    } else if (key == "height") {
      header_.height_m = *value;
    } else {
      throw ParseError(source_, line_no_, "unknown header field " + std::string(key));
    }
  }
  if (!have_slot || !(header_.slot_len > 0.0)) throw ParseError(source_, line_no_, "header lacks a positive slot_len");
}

std::optional<TraceRecord> TraceReader::read_record() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto f = text::split_fields(body, ',');
    if (f.size() != 7) throw ParseError(source_, line_no_, "expected 7 comma-separated fields");
    TraceRecord r;
    const auto slot = text::parse_int<std::int64_t>(text::trim(f[0]));
    const auto node = text::parse_int<NodeId>(text::trim(f[1]));
    const auto kind_s = text::trim(f[2]);
    const auto x = text::parse_double(text::trim(f[3]));
    const auto y = text::parse_double(text::trim(f[4]));
    const auto z = text::parse_double(text::trim(f[5]));
    const auto floor = floor_state_from_code(text::trim(f[6]));
    if (!slot || *slot < 0) throw ParseError(source_, line_no_, "invalid slot");
    if (!node) throw ParseError(source_, line_no_, "invalid node id");
    if (kind_s.size() != 1 || !kind_from_letter(kind_s[0])) throw ParseError(source_, line_no_, "invalid kind letter");
    if (!x || !y || !z || !std::isfinite(*x) || !std::isfinite(*y) || !std::isfinite(*z)) {
      throw ParseError(source_, line_no_, "invalid coordinate");
    }
    if (!floor) throw ParseError(source_, line_no_, "invalid floor state code");
    r.slot = *slot;
    r.node = *node;
    r.kind = *kind_from_letter(kind_s[0]);
    r.pos = {*x, *y, *z};
    r.floor = *floor;

    auto [it, fresh] = last_slot_.try_emplace(r.node, r.slot);
    if (!fresh) {
      if (r.slot == it->second) {
        throw ParseError(source_, line_no_, "duplicate record for node " + std::to_string(r.node));
      }
      if (r.slot < it->second) {
        throw ParseError(source_, line_no_,
                         "slot regression for node " + std::to_string(r.node) + ": slot " + std::to_string(r.slot) +
                             " after " + std::to_string(it->second));
      }
      it->second = r.slot;
    }
    if (r.slot < last_global_slot_) throw ParseError(source_, line_no_, "records not ordered by slot");
    if (r.slot == last_global_slot_ && r.node < last_node_in_slot_) {
      throw ParseError(source_, line_no_, "records within a slot not ordered by node id");
    }
    last_global_slot_ = r.slot;
    last_node_in_slot_ = r.node;
    return r;
  }
  return std::nullopt;
}

bool TraceReader::next_slot(std::vector<TraceRecord>& out) {
  out.clear();
  if (!pending_) pending_ = read_record();
  if (!pending_) return false;
  const std::int64_t slot = pending_->slot;
  while (pending_ && pending_->slot == slot) {
    out.push_back(*pending_);
    pending_ = read_record();
  }
  return true;
}

TraceFile::TraceFile(const std::filesystem::path& path) {
  auto file = std::make_unique<std::ifstream>(path);
  if (!*file) throw Error("cannot open trace file " + path.string());
  in_ = std::move(file);
  reader_ = std::make_unique<TraceReader>(*in_, path.string());
}

std::string format_record(const TraceRecord& r) {
  std::string s;
  s.reserve(64);
  s += std::to_string(r.slot);
  s += ',';
  s += std::to_string(r.node);
  s += ',';
  s += kind_letter(r.kind);
  s += ',';
  s += text::format_double(r.pos.x);
  s += ',';
  s += text::format_double(r.pos.y);
  s += ',';
  s += text::format_double(r.pos.z);
  s += ',';
  s += to_code(r.floor);
  return s;
}

void write_header(std::ostream& out, const TraceHeader& h) {
  out << "# odsim-trace 1 slot_len=" << text::format_double(h.slot_len) << " width=" << text::format_double(h.width_m)
      << " height=" << text::format_double(h.height_m) << '\n';
}

std::size_t write_traces(TraceSource& source, std::ostream& out) {
  write_header(out, source.header());
  std::vector<TraceRecord> slot;
  std::size_t n = 0;
  while (source.next_slot(slot)) {
    for (const auto& r : slot) out << format_record(r) << '\n';
    n += slot.size();
  }
  return n;
}

std::size_t write_traces(const TraceHeader& header, std::span<const TraceRecord> records, std::ostream& out) {
  VectorTraceSource src(header, {records.begin(), records.end()});
  return write_traces(src, out);
}

std::size_t write_traces(TraceSource& source, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write trace file " + path.string());
  const auto n = write_traces(source, out);
  if (!out) throw Error("failed writing trace file " + path.string());
  return n;
}

std::vector<TraceRecord> collect(TraceSource& source) {
  std::vector<TraceRecord> all;
  std::vector<TraceRecord> slot;
  while (source.next_slot(slot)) all.insert(all.end(), slot.begin(), slot.end());
  return all;
}

std::vector<TraceRecord> load_traces(std::istream& in, TraceHeader* header, const std::string& source) {
  TraceReader reader(in, source);
  auto all = collect(reader);
  if (header) *header = reader.header();
  return all;
}

std::vector<TraceRecord> load_traces(const std::filesystem::path& path, TraceHeader* header) {
  TraceFile file(path);
  auto all = collect(file);
  if (header) *header = file.header();
  return all;
}

}  // namespace odsim
