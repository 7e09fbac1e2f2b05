#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "odsim/trace.hpp"

namespace odsim {

/// Sparse external pairwise loss, keyed by slot and unordered node pair.
///
///   # odsim-loss 1
///   slot,node_a,node_b,loss_db
///
/// Lines are sorted by slot. A pair listed twice at one slot is rejected.
class LossTable {
 public:
  struct Entry {
    NodeId a;
    NodeId b;
    double loss_db;
  };

  void add(std::int64_t slot, NodeId a, NodeId b, double loss_db);

  std::optional<double> lookup(std::int64_t slot, NodeId a, NodeId b) const;
  /// Entries at `slot`, ordered by (min id, max id).
  std::span<const Entry> at(std::int64_t slot) const;
  /// Slots that carry at least one entry, ascending.
  std::vector<std::int64_t> slots() const;
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

 private:
  std::unordered_map<std::int64_t, std::vector<Entry>> by_slot_;
  std::size_t count_{0};
};

LossTable parse_loss_table(std::istream& in, const std::string& source = "<loss>");
LossTable load_loss_table(const std::filesystem::path& path);
void write_loss_table(std::ostream& out, const LossTable& table);

}  // namespace odsim
