#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "odsim/floor_state.hpp"
#include "odsim/geometry.hpp"

namespace odsim {

using NodeId = std::uint32_t;

/// Position and context of one node during one slot.
struct TraceRecord {
  std::int64_t slot{0};
  NodeId node{0};
  NodeKind kind{NodeKind::Pedestrian};
  Point3 pos;
  FloorState floor;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct TraceHeader {
  double slot_len{0.2};
  double width_m{0.0};
  double height_m{0.0};

  friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

/// Slot-by-slot record stream ordered by slot, then node id.
class TraceSource {
 public:
  virtual ~TraceSource() = default;
  virtual const TraceHeader& header() const = 0;
  /// Replaces `out` with every record of the next slot present in the stream.
  /// Returns false once the stream is exhausted.
  virtual bool next_slot(std::vector<TraceRecord>& out) = 0;
};

class VectorTraceSource final : public TraceSource {
 public:
  VectorTraceSource(TraceHeader header, std::vector<TraceRecord> records);
  const TraceHeader& header() const override { return header_; }
  bool next_slot(std::vector<TraceRecord>& out) override;

 private:
  TraceHeader header_;
  std::vector<TraceRecord> records_;
  std::size_t pos_{0};
};

/// Streaming parser for the text trace format.
///
///   # odsim-trace 1 slot_len=<s> width=<m> height=<m>
///   slot,node_id,kind,x,y,z,floor_code
///
/// Rejects malformed lines, per-node slot regressions, duplicates and
/// out-of-order records with the offending line number.
class TraceReader final : public TraceSource {
 public:
  explicit TraceReader(std::istream& in, std::string source = "<trace>");
  const TraceHeader& header() const override { return header_; }
  bool next_slot(std::vector<TraceRecord>& out) override;

 private:
  std::optional<TraceRecord> read_record();

  std::istream& in_;
  std::string source_;
  TraceHeader header_;
  std::size_t line_no_{0};
  std::optional<TraceRecord> pending_;
  std::unordered_map<NodeId, std::int64_t> last_slot_;
  std::int64_t last_global_slot_{-1};
  NodeId last_node_in_slot_{0};
};

/// Owns the file stream behind a TraceReader.
class TraceFile final : public TraceSource {
 public:
  explicit TraceFile(const std::filesystem::path& path);
  const TraceHeader& header() const override { return reader_->header(); }
  bool next_slot(std::vector<TraceRecord>& out) override { return reader_->next_slot(out); }

 private:
  std::unique_ptr<std::istream> in_;
  std::unique_ptr<TraceReader> reader_;
};

std::string format_record(const TraceRecord& r);
void write_header(std::ostream& out, const TraceHeader& header);

/// Writes the header and every record; returns the record count.
std::size_t write_traces(TraceSource& source, std::ostream& out);
std::size_t write_traces(const TraceHeader& header, std::span<const TraceRecord> records, std::ostream& out);
std::size_t write_traces(TraceSource& source, const std::filesystem::path& path);

std::vector<TraceRecord> collect(TraceSource& source);
std::vector<TraceRecord> load_traces(std::istream& in, TraceHeader* header = nullptr,
                                     const std::string& source = "<trace>");
std::vector<TraceRecord> load_traces(const std::filesystem::path& path, TraceHeader* header = nullptr);

}  // namespace odsim
